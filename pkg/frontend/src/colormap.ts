/**
 * Color scales: a sequential map for probabilities and a diverging map
 * centered at zero for differential grids.
 */

// Viridis control points (t = 0 .. 1), linearly interpolated.
const VIRIDIS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

function stops(ramp: [number, number, number][], t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const x = clamped * (ramp.length - 1);
  const i = Math.min(Math.floor(x), ramp.length - 2);
  const f = x - i;
  const r = Math.round(lerp(ramp[i][0], ramp[i + 1][0], f));
  const g = Math.round(lerp(ramp[i][1], ramp[i + 1][1], f));
  const b = Math.round(lerp(ramp[i][2], ramp[i + 1][2], f));
  return `rgb(${r},${g},${b})`;
}

/** Sequential scale on [lo, hi]. */
export function sequential(value: number, lo: number, hi: number): string {
  const span = hi - lo;
  return stops(VIRIDIS, span > 0 ? (value - lo) / span : 0);
}

/** Diverging blue <- white -> red, symmetric around zero. */
export function diverging(value: number, absMax: number): string {
  if (absMax <= 0) return "rgb(247,247,247)";
  const t = Math.max(-1, Math.min(1, value / absMax));
  if (t < 0) {
    const s = -t;
    const r = Math.round(lerp(247, 33, s));
    const g = Math.round(lerp(247, 102, s));
    const b = Math.round(lerp(247, 172, s));
    return `rgb(${r},${g},${b})`;
  }
  const r = Math.round(lerp(247, 178, t));
  const g = Math.round(lerp(247, 24, t));
  const b = Math.round(lerp(247, 43, t));
  return `rgb(${r},${g},${b})`;
}

export const STRATEGY_COLORS: Record<string, string> = {
  independent: "#7f7f7f",
  shared_latent: "#1a1a1a",
  quantum: "#1f77b4",
};
