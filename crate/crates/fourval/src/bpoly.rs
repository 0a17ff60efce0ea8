//! Pointwise evaluation of the recurrence polynomials B_i, Z_n, Y_n, the
//! V-parametrization, zero counts, trace identities, and the determinant
//! cross-checks.
//!
//! B_i is only ever evaluated, never expanded: degrees grow like 2^{ik}
//! while each evaluation is O(n) multiplies.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, TowerParams};

fn check_mid(field: &Field, tp: &TowerParams, a: Elem) -> Result<()> {
    if !field.in_subfield(a, tp.nk())? {
        return Err(Error::ArgNotInSubfield { l: tp.nk() });
    }
    Ok(())
}

/// B_1(a)..B_{up_to}(a) via B_{i+2} = B_{i+1} + a_i B_i with a_i = a^{2^{ik}}.
fn b_chain(field: &Field, tp: &TowerParams, a: Elem, up_to: u32) -> Vec<Elem> {
    debug_assert!((1..=tp.n + 1).contains(&up_to));
    let mut b = Vec::with_capacity(up_to as usize);
    b.push(Elem::ONE); // B_1
    if up_to >= 2 {
        b.push(Elem::ONE); // B_2
    }
    for i in 1..=up_to.saturating_sub(2) {
        let x_i = field.frob(a, i * tp.k);
        let next = field.add(b[i as usize], field.mul(x_i, b[(i - 1) as usize]));
        b.push(next);
    }
    b
}

/// B_i(a) for 1 <= i <= n+1.
pub fn b_eval(field: &Field, tp: &TowerParams, a: Elem, i: u32) -> Result<Elem> {
    check_mid(field, tp, a)?;
    if !(1..=tp.n + 1).contains(&i) {
        return Err(Error::BadParams(format!("B index {i} outside 1..={}", tp.n + 1)));
    }
    Ok(b_chain(field, tp, a, i)[(i - 1) as usize])
}

/// B_i(a) via the equivalent recurrence B_{i+2} = B_{i+1}^{2^k} + a_1 B_i^{2^{2k}}.
pub fn b_eval_alt(field: &Field, tp: &TowerParams, a: Elem, i: u32) -> Result<Elem> {
    check_mid(field, tp, a)?;
    if !(1..=tp.n + 1).contains(&i) {
        return Err(Error::BadParams(format!("B index {i} outside 1..={}", tp.n + 1)));
    }
    let k = tp.k;
    let a1 = field.frob(a, k);
    let mut prev = Elem::ONE; // B_1
    let mut cur = Elem::ONE; // B_2
    for _ in 1..=i.saturating_sub(2) {
        let next = field.add(field.frob(cur, k), field.mul(a1, field.frob(prev, 2 * k)));
        prev = cur;
        cur = next;
    }
    Ok(if i == 1 { prev } else { cur })
}

/// Z_n(a) = B_{n+1}(a) + a B_{n-1}^{2^k}(a); always lands in GF(2^k).
pub fn z_eval(field: &Field, tp: &TowerParams, a: Elem) -> Result<Elem> {
    check_mid(field, tp, a)?;
    let b = b_chain(field, tp, a, tp.n + 1);
    let bn1 = b[tp.n as usize]; // B_{n+1}
    let bm1 = b[(tp.n - 2) as usize]; // B_{n-1}
    let z = field.add(bn1, field.mul(a, field.frob(bm1, tp.k)));
    debug_assert_eq!(field.frob(z, tp.k), z);
    Ok(z)
}

/// Y_n(a) for the j-th conjugate pair: Z_n^2(a) + N_k^{nk}(a)(delta^j + delta^{-j}),
/// 1 <= j <= 2^{k-1}.
pub fn y_eval(field: &Field, tp: &TowerParams, delta: Elem, a: Elem, j: u32) -> Result<Elem> {
    check_mid(field, tp, a)?;
    if !(1..=1 << (tp.k - 1)).contains(&j) {
        return Err(Error::BadParams(format!("delta power {j} outside 1..={}", 1 << (tp.k - 1))));
    }
    let z = z_eval(field, tp, a)?;
    let norm = field.norm_between(a, tp.k, tp.nk())?;
    let dj = field.pow(delta, j as i64);
    let pair = field.add(dj, field.inv(dj)?);
    Ok(field.add(field.sqr(z), field.mul(norm, pair)))
}

/// V = v^{2^{2k}+1} / (v + v^{2^k})^{2^k+1} for v outside GF(2^k).
pub fn v_form(field: &Field, tp: &TowerParams, v: Elem) -> Result<Elem> {
    check_mid(field, tp, v)?;
    if field.in_subfield(v, tp.k)? {
        return Err(Error::DegenerateArg);
    }
    let k = tp.k as i64;
    let num = field.pow(v, (1 << (2 * k)) + 1);
    let den = field.pow(field.add(v, field.frob(v, tp.k)), (1 << k) + 1);
    field.div(num, den)
}

/// Closed form for B_n at a V-form point:
/// Tr_k^{nk}(v) / (v_1 + v_2) * prod_{j=2}^{n-1} (v / (v + v_1))^{2^{jk}}.
pub fn b_n_at_v_form(field: &Field, tp: &TowerParams, v: Elem) -> Result<Elem> {
    check_mid(field, tp, v)?;
    if field.in_subfield(v, tp.k)? {
        return Err(Error::DegenerateArg);
    }
    let k = tp.k;
    let v1 = field.frob(v, k);
    let v2 = field.frob(v, 2 * k);
    let tr = field.trace_between(v, k, tp.nk())?;
    let mut acc = field.div(tr, field.add(v1, v2))?;
    let ratio = field.div(v, field.add(v, v1))?;
    for j in 2..tp.n {
        acc = field.mul(acc, field.frob(ratio, j * k));
    }
    Ok(acc)
}

/// Cached zero sets of B_n and Z_n over GF(2^{nk}), shared by the affine
/// and exponential-sum classification.
pub struct ZeroSets {
    pub bn: Vec<Elem>,
    pub zn: Vec<Elem>,
}

impl ZeroSets {
    pub fn build(field: &Field, tp: &TowerParams) -> Result<ZeroSets> {
        let mut bn = Vec::new();
        let mut zn = Vec::new();
        for a in field.subfield_iter(tp.nk())? {
            let b = b_chain(field, tp, a, tp.n + 1);
            let bn_val = b[(tp.n - 1) as usize];
            let z = field.add(b[tp.n as usize], field.mul(a, field.frob(b[(tp.n - 2) as usize], tp.k)));
            if bn_val.is_zero() {
                bn.push(a);
            }
            if z.is_zero() {
                zn.push(a);
            }
        }
        bn.sort();
        zn.sort();
        Ok(ZeroSets { bn, zn })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ZeroCounts {
    pub zeros_bn: u64,
    pub zeros_zn: u64,
}

/// Brute-force zero counts of B_n and Z_n over GF(2^{nk}).
pub fn zero_counts(field: &Field, tp: &TowerParams) -> Result<ZeroCounts> {
    let sets = ZeroSets::build(field, tp)?;
    Ok(ZeroCounts {
        zeros_bn: sets.bn.len() as u64,
        zeros_zn: sets.zn.len() as u64,
    })
}

/// Closed-form counts the brute force must match (n odd).
pub fn expected_zero_counts(tp: &TowerParams) -> ZeroCounts {
    let (n, k) = (tp.n as u64, tp.k as u64);
    let denom = (1u64 << (2 * k)) - 1;
    ZeroCounts {
        zeros_bn: ((1u64 << ((n - 1) * k)) - 1) / denom,
        zeros_zn: ((1u64 << ((n + 1) * k)) - (1u64 << (2 * k))) / denom,
    }
}

/// A witness v with v_form(v) = a, if one exists.
pub fn find_v_preimage(field: &Field, tp: &TowerParams, a: Elem) -> Result<Option<Elem>> {
    check_mid(field, tp, a)?;
    for v in field.subfield_iter(tp.nk())? {
        if field.in_subfield(v, tp.k)? {
            continue;
        }
        if v_form(field, tp, v)? == a {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Both trace identities attached to the V-form, at a point with
/// Z_n(a) = 0 and B_n(a) != 0 (the nonzero-trace witness class).
pub fn trace_identities_check(field: &Field, tp: &TowerParams, a: Elem) -> Result<bool> {
    check_mid(field, tp, a)?;
    if z_eval(field, tp, a)? != Elem::ZERO {
        return Err(Error::NotVFormPoint);
    }
    let b = b_chain(field, tp, a, tp.n + 1);
    let bn = b[(tp.n - 1) as usize];
    if bn.is_zero() {
        return Err(Error::NotVFormPoint);
    }
    let k = tp.k;
    let bm1_2k = field.frob(b[(tp.n - 2) as usize], k); // B_{n-1}^{2^k}
    let den = field.pow(bn, (1i64 << k) + 1); // B_n^{2^k+1}
    let t1 = field.trace_between(field.div(bm1_2k, den)?, k, tp.nk())?;
    let t2 = field.trace_between(field.div(field.mul(bm1_2k, b[tp.n as usize]), den)?, k, tp.nk())?;
    Ok(t1 == Elem::ZERO && t2 == Elem::ZERO)
}

/// Determinant by Gaussian elimination over the field (char 2: row swaps
/// carry no sign).
fn det(field: &Field, mut mat: Vec<Vec<Elem>>) -> Elem {
    let n = mat.len();
    let mut det = Elem::ONE;
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
            return Elem::ZERO;
        };
        mat.swap(pivot_row, col);
        let pivot = mat[col][col];
        det = field.mul(det, pivot);
        let pinv = field.inv(pivot).expect("pivot nonzero");
        let (upper, lower) = mat.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = field.mul(row[col], pinv);
            for (slot, &pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *slot = field.add(*slot, field.mul(factor, pv));
            }
        }
    }
    det
}

/// The cyclic three-diagonal matrix whose determinant is Z_n^2: ones on
/// the diagonal, a_i on both neighbors of edge i, a_0 in the corners.
fn matrix_mn(field: &Field, tp: &TowerParams, a: Elem) -> Vec<Vec<Elem>> {
    let n = tp.n as usize;
    let mut mat = vec![vec![Elem::ZERO; n]; n];
    for (i, row) in mat.iter_mut().enumerate() {
        row[i] = Elem::ONE;
    }
    for i in 0..n - 1 {
        let ai = field.frob(a, (i as u32 + 1) * tp.k);
        mat[i][i + 1] = ai;
        mat[i + 1][i] = ai;
    }
    if n > 1 {
        mat[0][n - 1] = field.add(mat[0][n - 1], a);
        mat[n - 1][0] = field.add(mat[n - 1][0], a);
    }
    mat
}

pub fn det_mn(field: &Field, tp: &TowerParams, a: Elem) -> Result<Elem> {
    check_mid(field, tp, a)?;
    Ok(det(field, matrix_mn(field, tp, a)))
}

/// det M_n = Z_n^2(a), an independent derivation of Z_n.
pub fn det_check_mn(field: &Field, tp: &TowerParams, a: Elem) -> Result<bool> {
    Ok(det_mn(field, tp, a)? == field.sqr(z_eval(field, tp, a)?))
}

/// The twisted variant: edge i carries r_i^{+-1} a_i with alternating signs,
/// r_i = r^{2^{ik}}; top-right corner r a, bottom-left r^{-1} a.
fn matrix_mn_prime(field: &Field, tp: &TowerParams, r: Elem, a: Elem) -> Result<Vec<Vec<Elem>>> {
    let n = tp.n as usize;
    let mut mat = vec![vec![Elem::ZERO; n]; n];
    for (i, row) in mat.iter_mut().enumerate() {
        row[i] = Elem::ONE;
    }
    for i in 0..n - 1 {
        let t = i as u32 + 1;
        let ai = field.frob(a, t * tp.k);
        let ri = field.frob(r, t * tp.k);
        let (above, below) = if i % 2 == 0 {
            (field.mul(ri, ai), field.mul(field.inv(ri)?, ai))
        } else {
            (field.mul(field.inv(ri)?, ai), field.mul(ri, ai))
        };
        mat[i][i + 1] = above;
        mat[i + 1][i] = below;
    }
    mat[0][n - 1] = field.add(mat[0][n - 1], field.mul(r, a));
    mat[n - 1][0] = field.add(mat[n - 1][0], field.mul(field.inv(r)?, a));
    Ok(mat)
}

pub fn det_mn_prime(field: &Field, tp: &TowerParams, r: Elem, a: Elem) -> Result<Elem> {
    check_mid(field, tp, a)?;
    Ok(det(field, matrix_mn_prime(field, tp, r, a)?))
}

/// det M'_n = Z_n^2(a) + N_k^{nk}(a)(delta_r + delta_r^{-1}) with
/// delta_r = r^{(2^{nk}+1)/(2^k+1)}.
pub fn det_check_mn_prime(field: &Field, tp: &TowerParams, r: Elem, a: Elem) -> Result<bool> {
    let lhs = det_mn_prime(field, tp, r, a)?;
    let z = z_eval(field, tp, a)?;
    let norm = field.norm_between(a, tp.k, tp.nk())?;
    let e = ((1i64 << tp.nk()) + 1) / ((1i64 << tp.k) + 1);
    let delta_r = field.pow(r, e);
    let pair = field.add(delta_r, field.inv(delta_r)?);
    let rhs = field.add(field.sqr(z), field.mul(norm, pair));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn setup(n: u32, k: u32) -> (Field, TowerParams) {
        let tp = TowerParams::new(n, k).unwrap();
        (Field::new(tp.m, None).unwrap(), tp)
    }

    #[test]
    fn recurrence_routes_agree() {
        let (f, tp) = setup(3, 2);
        for a in f.subfield_iter(tp.nk()).unwrap() {
            for i in 1..=tp.n + 1 {
                assert_eq!(
                    b_eval(&f, &tp, a, i).unwrap(),
                    b_eval_alt(&f, &tp, a, i).unwrap()
                );
            }
        }
    }

    #[test]
    fn z_lands_in_base_field() {
        let (f, tp) = setup(3, 2);
        assert_eq!(z_eval(&f, &tp, Elem::ZERO).unwrap(), Elem::ONE);
        for a in f.subfield_iter(tp.nk()).unwrap() {
            let z = z_eval(&f, &tp, a).unwrap();
            assert!(f.in_subfield(z, tp.k).unwrap());
        }
    }

    #[test]
    fn z3_closed_form() {
        // n = 3: Z_3(a) = 1 + Tr_k^{3k}(a).
        for k in [1, 2, 3] {
            let (f, tp) = setup(3, k);
            for a in f.subfield_iter(tp.nk()).unwrap() {
                let expected = f.add(Elem::ONE, f.trace_between(a, k, tp.nk()).unwrap());
                assert_eq!(z_eval(&f, &tp, a).unwrap(), expected);
            }
        }
    }

    #[test]
    fn zero_counts_match_closed_form() {
        for (n, k) in [(3, 1), (3, 2), (3, 3), (5, 2)] {
            let (f, tp) = setup(n, k);
            assert_eq!(
                zero_counts(&f, &tp).unwrap(),
                expected_zero_counts(&tp),
                "(n,k)=({n},{k})"
            );
        }
    }

    #[test]
    fn v_form_image_is_zero_set_of_z() {
        let (f, tp) = setup(3, 2);
        let sets = ZeroSets::build(&f, &tp).unwrap();
        let mut image = BTreeSet::new();
        for v in f.subfield_iter(tp.nk()).unwrap() {
            if f.in_subfield(v, tp.k).unwrap() {
                continue;
            }
            image.insert(v_form(&f, &tp, v).unwrap());
        }
        let expected: BTreeSet<Elem> = sets.zn.iter().copied().collect();
        assert_eq!(image, expected);
    }

    #[test]
    fn v_form_fiber_sizes() {
        // Fibers over B_n = 0 points have size 2^{2k} - 1, the rest 2^k - 1.
        let (f, tp) = setup(3, 2);
        let sets = ZeroSets::build(&f, &tp).unwrap();
        let mut fibers: std::collections::BTreeMap<Elem, u64> = Default::default();
        for v in f.subfield_iter(tp.nk()).unwrap() {
            if f.in_subfield(v, tp.k).unwrap() {
                continue;
            }
            *fibers.entry(v_form(&f, &tp, v).unwrap()).or_default() += 1;
        }
        let k = tp.k;
        for (a, count) in fibers {
            let expected = if sets.bn.contains(&a) {
                (1u64 << (2 * k)) - 1
            } else {
                (1u64 << k) - 1
            };
            assert_eq!(count, expected, "fiber over {a:?}");
        }
    }

    #[test]
    fn bn_closed_form_at_v_points() {
        let (f, tp) = setup(3, 2);
        for v in f.subfield_iter(tp.nk()).unwrap() {
            if f.in_subfield(v, tp.k).unwrap() {
                continue;
            }
            let a = v_form(&f, &tp, v).unwrap();
            assert_eq!(
                b_n_at_v_form(&f, &tp, v).unwrap(),
                b_eval(&f, &tp, a, tp.n).unwrap()
            );
        }
    }

    #[test]
    fn trace_of_bn_plus_zn_vanishes() {
        let (f, tp) = setup(3, 2);
        for a in f.subfield_iter(tp.nk()).unwrap() {
            let s = f.add(
                b_eval(&f, &tp, a, tp.n).unwrap(),
                z_eval(&f, &tp, a).unwrap(),
            );
            assert_eq!(f.trace_between(s, tp.k, tp.nk()).unwrap(), Elem::ZERO);
        }
    }

    #[test]
    fn trace_identities_at_v_points() {
        let (f, tp) = setup(3, 2);
        let sets = ZeroSets::build(&f, &tp).unwrap();
        let mut checked = 0;
        for &a in &sets.zn {
            if sets.bn.contains(&a) {
                continue;
            }
            assert!(trace_identities_check(&f, &tp, a).unwrap());
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn determinant_matches_z_squared() {
        for (n, k) in [(3, 2), (5, 2)] {
            let (f, tp) = setup(n, k);
            let mut count = 0;
            for a in f.subfield_iter(tp.nk()).unwrap() {
                assert!(det_check_mn(&f, &tp, a).unwrap());
                count += 1;
                if count >= 200 {
                    break;
                }
            }
        }
    }

    #[test]
    fn twisted_determinant_matches_y() {
        let (f, tp) = setup(3, 2);
        let q = 1u64 << tp.nk();
        let base = f.from_log(q - 1); // generator of the order-(q+1) subgroup
        for u in [1u64, 2, 3, 5, 11, 17] {
            let r = f.pow(base, u as i64);
            for a in f.subfield_iter(tp.nk()).unwrap() {
                assert!(det_check_mn_prime(&f, &tp, r, a).unwrap(), "u={u} a={a:?}");
            }
        }
    }
}

