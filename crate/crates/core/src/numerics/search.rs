use alloc::vec::Vec;

const GOLDEN_MAX_ITER: usize = 80;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal `h` on `[a, b]`. Returns
/// `(max value, argmax)`; at most 80 iterations.
pub fn golden_section_max(h: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut hc = h(c);
    let mut hd = h(d);
    for _ in 0..GOLDEN_MAX_ITER {
        if (b - a).abs() <= tol {
            break;
        }
        if hc >= hd {
            b = d;
            d = c;
            hd = hc;
            c = b - INV_PHI * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + INV_PHI * (b - a);
            hd = h(d);
        }
    }
    let mid = 0.5 * (a + b);
    let hm = h(mid);
    let mut best = (hm, mid);
    for cand in [(hc, c), (hd, d)] {
        if cand.0 > best.0 {
            best = cand;
        }
    }
    best
}

/// One refined local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowMax {
    pub value: f64,
    pub at: f64,
}

/// All local maxima of `h` over the sorted sample points `xs` whose coarse
/// value is at least `keep_fraction` of the best coarse value, each refined
/// by golden-section search between its neighbours.
pub fn local_maxima(
    h: impl Fn(f64) -> f64,
    xs: &[f64],
    keep_fraction: f64,
    refine_tol: f64,
) -> Vec<WindowMax> {
    let n = xs.len();
    if n == 0 {
        return Vec::new();
    }
    let vals: Vec<f64> = xs.iter().map(|&x| h(x)).collect();
    let best = vals
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    for i in 0..n {
        let v = vals[i];
        if !v.is_finite() || v < keep_fraction * best {
            continue;
        }
        let left_ok = i == 0 || vals[i - 1] <= v;
        let right_ok = i + 1 == n || vals[i + 1] <= v;
        // plateaus: keep only the first point
        let plateau_dup = i > 0 && vals[i - 1] == v;
        if !(left_ok && right_ok) || plateau_dup {
            continue;
        }
        let a = if i == 0 { xs[0] } else { xs[i - 1] };
        let b = if i + 1 == n { xs[n - 1] } else { xs[i + 1] };
        let (rv, rx) = if b > a {
            golden_section_max(&h, a, b, refine_tol)
        } else {
            (v, xs[i])
        };
        if rv >= v {
            out.push(WindowMax { value: rv, at: rx });
        } else {
            out.push(WindowMax {
                value: v,
                at: xs[i],
            });
        }
    }
    out
}

/// Coarse grid of `coarse + 1` points on `window` followed by golden-section
/// refinement around the local maxima. Returns `(max value, argmax)`;
/// near-ties (relative 1e-9) go to the argmax of smallest absolute value.
///
/// Accuracy is limited by the coarse density: maxima narrower than the grid
/// spacing can be missed.
pub fn sup_on_window(
    h: impl Fn(f64) -> f64,
    window: (f64, f64),
    coarse: usize,
    refine_tol: f64,
) -> (f64, f64) {
    let (lo, hi) = window;
    let n = coarse.max(2);
    let xs: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    let maxima = local_maxima(&h, &xs, 0.0, refine_tol);
    pick_with_ties(&maxima, 1e-9)
        .map(|m| (m.value, m.at))
        .unwrap_or((h(lo), lo))
}

pub(crate) fn pick_with_ties(maxima: &[WindowMax], rel: f64) -> Option<WindowMax> {
    let best = maxima
        .iter()
        .map(|m| m.value)
        .fold(f64::NEG_INFINITY, f64::max);
    if !best.is_finite() {
        return None;
    }
    let thresh = best - rel * best.abs();
    maxima
        .iter()
        .filter(|m| m.value >= thresh)
        .min_by(|a, b| a.at.abs().total_cmp(&b.at.abs()))
        .copied()
}
