//! Polynomial roots from companion-matrix eigenvalues.
//!
//! Coefficients are stored highest degree first. Multiple roots, which the
//! eigenvalue problem scatters by roughly `ε^{1/m}`, are snapped back together
//! when doing so reproduces the coefficients at least as well.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SpinError};

type C64 = Complex64;

/// Chordal separation thresholds tried, in increasing order, when merging
/// scattered multiple roots. A k-fold root scatters by about `ε^{1/k}`, which
/// approaches the sphere's diameter for large k.
const SNAP_THRESHOLDS: [f64; 13] = [1e-9, 1e-7, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 0.6, 1.2, 2.1];

/// Inverse stereographic image of `w` on the unit sphere (`∞` ↦ north pole),
/// computed through `1/w` outside the unit disc.
pub fn sphere_point(w: C64) -> [f64; 3] {
    if w.norm() <= 1.0 {
        let d = 1.0 + w.norm_sqr();
        [2.0 * w.re / d, 2.0 * w.im / d, (w.norm_sqr() - 1.0) / d]
    } else {
        let u = w.inv();
        let d = 1.0 + u.norm_sqr();
        [2.0 * u.re / d, -2.0 * u.im / d, (1.0 - u.norm_sqr()) / d]
    }
}

/// Chordal distance on the Riemann sphere, in `[0, 2]`.
pub fn chordal(a: C64, b: C64) -> f64 {
    let (p, q) = (sphere_point(a), sphere_point(b));
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

pub(crate) fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn derivative(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    coeffs[..n].iter().enumerate().map(|(i, &c)| c * (n - i) as f64).collect()
}

/// Evaluates `p/p'` with the reversed polynomial outside the unit disc, so
/// high degrees do not overflow.
fn newton_step(coeffs: &[C64], z: C64) -> Option<C64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return None;
    }
    if z.norm() <= 1.0 {
        let d = horner(&derivative(coeffs), z);
        (d.norm() > 0.0).then(|| horner(coeffs, z) / d)
    } else {
        // p(z) = z^n r(1/z),  p'(z) = z^{n-1} (n r(u) - u r'(u)),  u = 1/z
        let rev: Vec<C64> = coeffs.iter().rev().copied().collect();
        let u = z.inv();
        let r = horner(&rev, u);
        let denom = r * n as f64 - u * horner(&derivative(&rev), u);
        (denom.norm() > 0.0).then(|| z * r / denom)
    }
}

/// `|p(z)|` relative to the size of its terms, insensitive to scale.
fn relative_residual(coeffs: &[C64], z: C64) -> f64 {
    let (u, c): (C64, Vec<C64>) = if z.norm() <= 1.0 {
        (z, coeffs.to_vec())
    } else {
        (z.inv(), coeffs.iter().rev().copied().collect())
    };
    let absu = u.norm();
    let scale = c.iter().fold(0.0, |acc, a| acc * absu + a.norm());
    if scale == 0.0 {
        0.0
    } else {
        horner(&c, u).norm() / scale
    }
}

/// Parlett–Reinsch diagonal balancing by powers of two.
fn balance(m: &mut DMatrix<C64>) {
    let n = m.nrows();
    let l1 = |v: C64| v.re.abs() + v.im.abs();
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for k in 0..n {
                if k != i {
                    c += l1(m[(k, i)]);
                    r += l1(m[(i, k)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / 2.0 {
                cc *= 2.0;
                rr /= 2.0;
                f *= 2.0;
            }
            while cc >= rr * 2.0 {
                cc /= 2.0;
                rr *= 2.0;
                f /= 2.0;
            }
            if (cc + rr) < 0.95 * s {
                converged = false;
                for k in 0..n {
                    m[(i, k)] /= f;
                    m[(k, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Eigenvalues of the companion matrix of a polynomial with non-zero
/// leading coefficient.
fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len() - 1;
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-coeffs[1] / coeffs[0]]),
        _ => {}
    }
    let lead = coeffs[0];
    let mut m = DMatrix::<C64>::zeros(n, n);
    for c in 0..n {
        m[(0, c)] = -coeffs[c + 1] / lead;
    }
    for r in 1..n {
        m[(r, r - 1)] = C64::new(1.0, 0.0);
    }
    balance(&mut m);
    let schur = m
        .try_schur(f64::EPSILON, 100 * n)
        .ok_or_else(|| SpinError::numeric("companion eigenvalue iteration did not converge"))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Coefficients of `∏ (z - r)` up to an overall scale; factors with `|r| > 1`
/// enter as `(z/r - 1)` to keep the expansion bounded.
pub(crate) fn expand_scaled(roots: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let (a, b) = if r.norm() > 1.0 { (r.inv(), C64::new(-1.0, 0.0)) } else { (C64::new(1.0, 0.0), -r) };
        let mut next = vec![C64::new(0.0, 0.0); out.len() + 1];
        for (i, &c) in out.iter().enumerate() {
            next[i] += c * a;
            next[i + 1] += c * b;
        }
        let peak = next.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if peak > 0.0 {
            next.iter_mut().for_each(|c| *c /= peak);
        }
        out = next;
    }
    out
}

/// `min_α ‖α·expand(roots) − coeffs‖ / ‖coeffs‖`.
fn expansion_residual(coeffs: &[C64], roots: &[C64]) -> f64 {
    let e = expand_scaled(roots);
    let ee: f64 = e.iter().map(|c| c.norm_sqr()).sum();
    let cc: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let alpha = e.iter().zip(coeffs).map(|(a, b)| a.conj() * b).sum::<C64>() / ee;
    let rr: f64 = e.iter().zip(coeffs).map(|(a, b)| (a * alpha - b).norm_sqr()).sum();
    (rr / cc).sqrt()
}

/// Single-linkage groups of roots whose chordal distance is below `t`.
fn clusters(roots: &[C64], t: f64) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    for a in 0..n {
        for b in a + 1..n {
            if chordal(roots[a], roots[b]) < t {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Newton on the `(m-1)`-th derivative, where an `m`-fold root is simple.
fn refine_multiple(coeffs: &[C64], start: C64, multiplicity: usize) -> C64 {
    // work on whichever of p or its reversal keeps the root inside the disc
    let outside = start.norm() > 1.0;
    let mut poly: Vec<C64> = if outside { coeffs.iter().rev().copied().collect() } else { coeffs.to_vec() };
    for _ in 1..multiplicity {
        poly = derivative(&poly);
    }
    let mut z = if outside { start.inv() } else { start };
    let dpoly = derivative(&poly);
    for _ in 0..8 {
        let d = horner(&dpoly, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = horner(&poly, z) / d;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1e-300) {
            break;
        }
    }
    if outside {
        z.inv()
    } else {
        z
    }
}

fn snap_multiple_roots(coeffs: &[C64], roots: Vec<C64>) -> Vec<C64> {
    let original = roots.clone();
    let mut current = roots;
    // snapped roots may be as good as the raw ones up to rounding
    let bound = 2.0 * expansion_residual(coeffs, &current) + 64.0 * f64::EPSILON;
    let mut accepted: Vec<Vec<usize>> = Vec::new();
    for &t in &SNAP_THRESHOLDS {
        for group in clusters(&original, t) {
            if group.len() < 2 || accepted.contains(&group) {
                continue;
            }
            let centroid = group.iter().map(|&i| original[i]).sum::<C64>() / group.len() as f64;
            let rho = refine_multiple(coeffs, centroid, group.len());
            if !rho.is_finite() {
                continue;
            }
            let mut candidate = current.clone();
            group.iter().for_each(|&i| candidate[i] = rho);
            let res = expansion_residual(coeffs, &candidate);
            if res <= bound {
                current = candidate;
                accepted.retain(|g| !g.iter().all(|i| group.contains(i)));
                accepted.push(group);
            }
        }
    }
    current
}

/// All roots of `Σ coeffs[i] z^{n-i}`, with `None` for each vanishing leading
/// coefficient (a root at infinity).
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<Option<C64>>> {
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        return Err(SpinError::domain("the zero polynomial has no root set"));
    }
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scaled: Vec<C64> = coeffs.iter().map(|c| c / peak).collect();
    let vanishes = |c: &C64| c.norm() < f64::MIN_POSITIVE;
    let at_infinity = scaled.iter().take_while(|c| vanishes(c)).count();
    let at_zero = scaled.iter().rev().take_while(|c| vanishes(c)).count();
    let core = &scaled[at_infinity..scaled.len() - at_zero];

    // the orientation whose roots have product of modulus ≤ 1 is the better conditioned
    let flip = core[0].norm() < core[core.len() - 1].norm();
    let oriented: Vec<C64> = if flip { core.iter().rev().copied().collect() } else { core.to_vec() };
    // rescale z = s·u so that the geometric mean of |u| is one
    let m = oriented.len() - 1;
    let ln_s = if m == 0 { 0.0 } else { (oriented[m].norm().ln() - oriented[0].norm().ln()) / m as f64 };
    let mut oriented: Vec<C64> =
        oriented.iter().enumerate().map(|(k, c)| c * ((m - k) as f64 * ln_s).exp()).collect();
    let top = oriented.iter().map(|c| c.norm()).fold(0.0, f64::max);
    oriented.iter_mut().for_each(|c| *c /= top);
    let scale = ln_s.exp();
    let mut roots = companion_roots(&oriented)?;
    for r in roots.iter_mut() {
        if let Some(step) = newton_step(&oriented, *r) {
            let trial = *r - step;
            if trial.is_finite() && relative_residual(&oriented, trial) < relative_residual(&oriented, *r) {
                *r = trial;
            }
        }
    }
    let roots: Vec<C64> = snap_multiple_roots(&oriented, roots).into_iter().map(|u| u * scale).collect();
    let mut out: Vec<Option<C64>> = Vec::with_capacity(coeffs.len() - 1);
    out.extend(roots.into_iter().map(|r| {
        if !flip {
            Some(r)
        } else if r.norm() == 0.0 {
            None
        } else {
            Some(r.inv())
        }
    }));
    out.extend(std::iter::repeat_n(Some(C64::new(0.0, 0.0)), at_zero));
    out.extend(std::iter::repeat_n(None, at_infinity));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sorted_by_re(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }

    #[test]
    fn quadratic_roots() {
        // z² - 3z + 2
        let r: Vec<C64> = polynomial_roots(&[c(1.0, 0.0), c(-3.0, 0.0), c(2.0, 0.0)])
            .unwrap()
            .into_iter()
            .map(Option::unwrap)
            .collect();
        let r = sorted_by_re(r);
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn degree_drop_and_zero_roots() {
        // 0·z³ + z² - z + 0  →  roots {∞, 0, 1}
        let r = polynomial_roots(&[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(r.iter().filter(|x| x.is_none()).count(), 1);
        let finite: Vec<C64> = sorted_by_re(r.into_iter().flatten().collect());
        assert_eq!(finite[0], c(0.0, 0.0));
        assert!((finite[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn high_multiplicity_root_is_recovered() {
        let w = c(0.3, -1.7);
        let coeffs = expand_scaled(&vec![w; 20]);
        let r = polynomial_roots(&coeffs).unwrap();
        for x in r {
            assert!(chordal(x.unwrap(), w) < 1e-9);
        }
    }

    #[test]
    fn distinct_close_roots_are_not_merged() {
        let roots = [c(1.0, 0.0), c(1.0 + 1e-4, 0.0), c(-2.0, 0.5)];
        let got = polynomial_roots(&expand_scaled(&roots)).unwrap();
        let mut got: Vec<C64> = got.into_iter().flatten().collect();
        got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((got[1] - roots[0]).norm() < 1e-8);
        assert!((got[2] - roots[1]).norm() < 1e-8);
    }

    #[test]
    fn large_roots_survive() {
        let roots = [c(1e3, 2.0), c(-5e2, 1e2), c(0.01, 0.0), c(0.0, 3.0)];
        let got = polynomial_roots(&expand_scaled(&roots)).unwrap();
        for r in roots {
            let best = got.iter().map(|g| chordal(g.unwrap(), r)).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "{r}: {best}");
        }
    }

    #[test]
    fn chordal_metric_basics() {
        assert!((chordal(c(0.0, 0.0), c(1e300, 0.0)) - 2.0).abs() < 1e-12);
        assert!((chordal(c(1.0, 0.0), c(-1.0, 0.0)) - 2.0).abs() < 1e-15);
        assert_eq!(chordal(c(2.0, 1.0), c(2.0, 1.0)), 0.0);
    }
}
