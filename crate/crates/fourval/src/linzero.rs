//! Kernel counting for the linearized trinomial
//! L_a(z) = z^{2^{(n+1)k}} + r^{2^k} a^{2^k} z^{2^{2k}} + r a z over GF(2^{2nk}),
//! treated as a GF(2)-linear map on an m-dimensional bit space.

use crate::bpoly;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, TowerParams};
use serde::Serialize;

/// Square bit matrix of size m <= 24, one u64 row mask per row.
#[derive(Debug, Clone)]
pub struct BinMatrix {
    pub m: u32,
    rows: Vec<u64>,
}

impl BinMatrix {
    pub fn zero(m: u32) -> BinMatrix {
        BinMatrix {
            m,
            rows: vec![0; m as usize],
        }
    }

    pub fn get(&self, i: u32, j: u32) -> bool {
        self.rows[i as usize] >> j & 1 == 1
    }

    pub fn set(&mut self, i: u32, j: u32, bit: bool) {
        if bit {
            self.rows[i as usize] |= 1 << j;
        } else {
            self.rows[i as usize] &= !(1 << j);
        }
    }

    /// Rank over GF(2) by row elimination.
    pub fn rank(&self) -> u32 {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.m {
            let Some(pivot) = (rank as usize..rows.len()).find(|&r| rows[r] >> col & 1 == 1)
            else {
                continue;
            };
            rows.swap(pivot, rank as usize);
            let prow = rows[rank as usize];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank as usize && *row >> col & 1 == 1 {
                    *row ^= prow;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn nullity(&self) -> u32 {
        self.m - self.rank()
    }

    /// Basis of the null space, as coefficient bit vectors.
    pub fn kernel_basis(&self) -> Vec<u32> {
        let m = self.m as usize;
        let mut rows = self.rows.clone();
        // Reduced row echelon form, tracking pivot columns.
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0usize;
        for col in 0..m {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(pivot, rank);
            let prow = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row >> col & 1 == 1 {
                    *row ^= prow;
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
        }
        let pivot_cols: std::collections::BTreeSet<usize> =
            pivot_col_of_row.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..m {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut vec = 1u32 << free;
            for (row_idx, &pc) in pivot_col_of_row.iter().enumerate() {
                if rows[row_idx] >> free & 1 == 1 {
                    vec |= 1 << pc;
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Apply to a coefficient bit vector.
    pub fn apply(&self, x: u32) -> u32 {
        let mut y = 0u32;
        for i in 0..self.m {
            let dot = (self.rows[i as usize] & x as u64).count_ones() & 1;
            y |= dot << i;
        }
        y
    }
}

/// Index shift of the decomposition: d(i) = i for i <= 2^{k-1}, else -(2^k+1-i).
pub fn d_shift(k: u32, i: u32) -> i64 {
    debug_assert!((1..=1 << k).contains(&i));
    if i <= 1 << (k - 1) {
        i as i64
    } else {
        -((1i64 << k) + 1 - i as i64)
    }
}

/// Both conditions on the twist: r^{2^{nk}+1} = 1 but r^{(2^{nk}+1)/(2^k+1)} != 1.
pub fn check_r(field: &Field, tp: &TowerParams, r: Elem) -> Result<()> {
    let q1 = (1i64 << tp.nk()) + 1;
    if field.pow(r, q1) != Elem::ONE || field.pow(r, q1 / ((1 << tp.k) + 1)) == Elem::ONE {
        return Err(Error::BadTwistorR);
    }
    Ok(())
}

/// L_a(z), evaluated directly.
pub fn eval_l_big(field: &Field, tp: &TowerParams, a: Elem, r: Elem, z: Elem) -> Elem {
    let k = tp.k;
    let mut acc = field.frob(z, (tp.n + 1) * k);
    acc = field.add(
        acc,
        field.mul(field.mul(field.frob(r, k), field.frob(a, k)), field.frob(z, 2 * k)),
    );
    field.add(acc, field.mul(field.mul(r, a), z))
}

/// The matrix of z -> L_a(z) in the polynomial basis: column j is L_a(x^j).
pub fn build_linear_map(field: &Field, tp: &TowerParams, a: Elem, r: Elem) -> Result<BinMatrix> {
    check_r(field, tp, r)?;
    if !field.in_subfield(a, tp.nk())? {
        return Err(Error::ArgNotInSubfield { l: tp.nk() });
    }
    let m = tp.m;
    let mut mat = BinMatrix::zero(m);
    for j in 0..m {
        let image = eval_l_big(field, tp, a, r, field.from_bits(1 << j));
        let bits = field.bits(image);
        for i in 0..m {
            if bits >> i & 1 == 1 {
                mat.set(i, j, true);
            }
        }
    }
    Ok(mat)
}

/// 2^{nullity} of the map; the zero count T_a.
pub fn kernel_count(matrix: &BinMatrix) -> u64 {
    1 << matrix.nullity()
}

/// All kernel elements as field elements (the basis has at most 2k vectors
/// here, so the full expansion is tiny).
pub fn kernel_elements(field: &Field, matrix: &BinMatrix) -> Vec<Elem> {
    let basis = matrix.kernel_basis();
    let mut elems = Vec::with_capacity(1 << basis.len());
    for mask in 0u32..1 << basis.len() {
        let mut bits = 0u32;
        for (idx, &b) in basis.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                bits ^= b;
            }
        }
        elems.push(field.from_bits(bits));
    }
    elems.sort();
    elems
}

/// Brute-force zero enumeration over all of GF(2^{2nk}); oracle only.
pub fn brute_kernel(field: &Field, tp: &TowerParams, a: Elem, r: Elem) -> Result<Vec<Elem>> {
    check_r(field, tp, r)?;
    let mut zeros = vec![Elem::ZERO];
    for i in 0..field.p() as u64 {
        let z = field.from_log(i);
        if eval_l_big(field, tp, a, r, z).is_zero() {
            zeros.push(z);
        }
    }
    zeros.sort();
    Ok(zeros)
}

#[derive(Debug, Clone, Serialize)]
pub struct LinReport {
    pub r_power_index: u32,
    pub t_a: u64,
    pub kernel_dim_gf2: u32,
    pub q_invariant_ok: bool,
}

/// T_a for the twist r^{d(i)}.
pub fn t_a(field: &Field, tp: &TowerParams, a: Elem, r: Elem, i: u32) -> Result<u64> {
    let r_i = field.pow(r, d_shift(tp.k, i));
    Ok(kernel_count(&build_linear_map(field, tp, a, r_i)?))
}

/// Y_n(a) nonzero forces T_a = 1; Y_n(a) zero permits 1 or 2^{2k}.
pub fn verify_y_dichotomy(
    field: &Field,
    tp: &TowerParams,
    delta: Elem,
    a: Elem,
    r: Elem,
    i: u32,
) -> Result<bool> {
    let t = t_a(field, tp, a, r, i)?;
    if a.is_zero() {
        return Ok(t == 1);
    }
    let j = if i <= 1 << (tp.k - 1) {
        i
    } else {
        (1 << tp.k) + 1 - i
    };
    let y = bpoly::y_eval(field, tp, delta, a, j)?;
    Ok(if y.is_zero() {
        t == 1 || t == 1 << (2 * tp.k)
    } else {
        t == 1
    })
}

/// Tr_{2nk}(r a v^{2^k+1}) + Tr_{nk}(v^{2^{nk}+1}) = 0 for every kernel v.
pub fn q_invariant_check(
    field: &Field,
    tp: &TowerParams,
    a: Elem,
    r: Elem,
    i: u32,
) -> Result<bool> {
    let r_i = field.pow(r, d_shift(tp.k, i));
    let matrix = build_linear_map(field, tp, a, r_i)?;
    for v in kernel_elements(field, &matrix) {
        let first = field.abs_trace_bit(field.mul(
            field.mul(r_i, a),
            field.pow(v, (1 << tp.k) + 1),
        ));
        let half_norm = field.pow(v, (1 << tp.nk()) + 1);
        let second = if field.trace_between(half_norm, 1, tp.nk())? == Elem::ONE {
            1
        } else {
            0
        };
        if !(first + second).is_multiple_of(2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The degree-2^{2k} relation every kernel element satisfies when B_n(a) != 0:
/// B_n^2(a) z^{2^{2k}} = r r_1^{-1} (a a_1 (B_{n-2}^2(a))^{2^{2k}}
///                        + delta_r^{-1} prod_{i=2}^{n-1} a_i) z.
pub fn deg22k_check(field: &Field, tp: &TowerParams, a: Elem, r: Elem) -> Result<bool> {
    check_r(field, tp, r)?;
    let k = tp.k;
    let bn = bpoly::b_eval(field, tp, a, tp.n)?;
    if bn.is_zero() {
        return Err(Error::DegenerateArg);
    }
    let bn2 = field.sqr(bn);
    let bnm2 = bpoly::b_eval(field, tp, a, tp.n - 2)?;
    let delta_r = field.pow(r, ((1i64 << tp.nk()) + 1) / ((1 << k) + 1));
    let mut inner = field.mul(
        field.mul(a, field.frob(a, k)),
        field.frob(field.sqr(bnm2), 2 * k),
    );
    let mut prod = Elem::ONE;
    for i in 2..tp.n {
        prod = field.mul(prod, field.frob(a, i * k));
    }
    inner = field.add(inner, field.mul(field.inv(delta_r)?, prod));
    let coeff = field.mul(field.mul(r, field.inv(field.frob(r, k))?), inner);
    let matrix = build_linear_map(field, tp, a, r)?;
    for z in kernel_elements(field, &matrix) {
        if field.mul(bn2, field.frob(z, 2 * k)) != field.mul(coeff, z) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: u32, k: u32) -> (Field, TowerParams, Elem, Elem) {
        let tp = TowerParams::new(n, k).unwrap();
        let field = Field::new(tp.m, None).unwrap();
        let q = 1u64 << tp.nk();
        let r = field.from_log(((q - 1) << (k - 1)) % (field.p() as u64));
        let delta = field.pow(r, ((q + 1) / ((1 << k) + 1)) as i64);
        (field, tp, r, delta)
    }

    #[test]
    fn r_conditions_hold() {
        for (n, k) in [(3, 1), (3, 2), (3, 3), (5, 2)] {
            let (field, tp, r, delta) = setup(n, k);
            check_r(&field, &tp, r).unwrap();
            // delta has order exactly 2^k + 1.
            assert_eq!(field.pow(delta, (1 << k) + 1), Elem::ONE);
            for e in 1..=(1 << k) {
                assert_ne!(field.pow(delta, e), Elem::ONE);
            }
        }
    }

    #[test]
    fn bad_r_rejected() {
        let (field, tp, r, _) = setup(3, 2);
        // alpha fails the first condition.
        assert!(matches!(
            check_r(&field, &tp, field.alpha()),
            Err(Error::BadTwistorR)
        ));
        // r^{2^k+1} satisfies the first but collapses delta to 1.
        let collapsed = field.pow(r, (1 << tp.k) + 1);
        assert!(matches!(
            check_r(&field, &tp, collapsed),
            Err(Error::BadTwistorR)
        ));
    }

    #[test]
    fn zero_a_map_is_invertible() {
        let (field, tp, r, _) = setup(3, 2);
        let matrix = build_linear_map(&field, &tp, Elem::ZERO, r).unwrap();
        assert_eq!(kernel_count(&matrix), 1);
    }

    #[test]
    fn matrix_agrees_with_direct_evaluation() {
        let (field, tp, r, _) = setup(3, 2);
        // subfield elements have log index divisible by p / (2^{nk} - 1)
        let a = field.from_log(field.p() as u64 / ((1 << tp.nk()) - 1) * 5);
        let matrix = build_linear_map(&field, &tp, a, r).unwrap();
        for i in 0..200u64 {
            let z = field.from_log(i * 17 % field.p() as u64);
            let direct = eval_l_big(&field, &tp, a, r, z);
            assert_eq!(matrix.apply(field.bits(z)), field.bits(direct));
        }
    }

    #[test]
    fn kernel_counts_are_dichotomous() {
        let (field, tp, r, _) = setup(3, 2);
        for a in field.subfield_units(tp.nk()).unwrap() {
            for i in 1..=1 << tp.k {
                let t = t_a(&field, &tp, a, r, i).unwrap();
                assert!(t == 1 || t == 16, "a={a:?} i={i} t={t}");
                if bpoly::z_eval(&field, &tp, a).unwrap().is_zero() {
                    assert_eq!(t, 1, "Z=0 must force a unique zero, a={a:?}");
                }
            }
        }
    }

    #[test]
    fn elimination_matches_brute_force() {
        let (field, tp, r, _) = setup(3, 2);
        for (step, a) in field.subfield_units(tp.nk()).unwrap().enumerate() {
            if step % 7 != 0 {
                continue;
            }
            let matrix = build_linear_map(&field, &tp, a, r).unwrap();
            let kernel = kernel_elements(&field, &matrix);
            assert_eq!(kernel, brute_kernel(&field, &tp, a, r).unwrap());
        }
    }

    #[test]
    fn y_dichotomy_exhaustive() {
        for (n, k) in [(3, 2), (3, 3)] {
            let (field, tp, r, delta) = setup(n, k);
            for a in field.subfield_units(tp.nk()).unwrap() {
                for i in 1..=1 << tp.k {
                    assert!(
                        verify_y_dichotomy(&field, &tp, delta, a, r, i).unwrap(),
                        "(n,k)=({n},{k}) a={a:?} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_closed_under_gf22k_scaling() {
        let (field, tp, r, _) = setup(3, 2);
        let scalars: Vec<Elem> = field.subfield_iter(2 * tp.k).unwrap().collect();
        for a in field.subfield_units(tp.nk()).unwrap() {
            let matrix = build_linear_map(&field, &tp, a, r).unwrap();
            let kernel = kernel_elements(&field, &matrix);
            if kernel.len() == 1 {
                continue;
            }
            for &v in &kernel {
                for &s in &scalars {
                    assert!(kernel.binary_search(&field.mul(s, v)).is_ok());
                }
            }
        }
    }

    #[test]
    fn q_invariant_holds_on_kernels() {
        let (field, tp, r, _) = setup(3, 2);
        for a in field.subfield_units(tp.nk()).unwrap() {
            for i in 1..=1 << tp.k {
                assert!(q_invariant_check(&field, &tp, a, r, i).unwrap());
            }
        }
    }

    #[test]
    fn deg22k_relation_on_kernels() {
        let (field, tp, r, _) = setup(3, 2);
        for a in field.subfield_units(tp.nk()).unwrap() {
            if bpoly::b_eval(&field, &tp, a, tp.n).unwrap().is_zero() {
                continue;
            }
            assert!(deg22k_check(&field, &tp, a, r).unwrap(), "a={a:?}");
        }
    }
}
