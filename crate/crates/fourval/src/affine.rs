//! Classification of the affine equation
//! A_a(x) = a^{2^k} x^{2^{2k}} + x^{2^k} + a x + c over GF(2^{nk}),
//! with closed-form zeros and the Bluher-style trichotomy counts.

use crate::bpoly;
use crate::error::Result;
use crate::field::{Elem, Field, TowerParams};
use rayon::prelude::*;
use serde::Serialize;

/// Number of zeros of A_a in GF(2^{nk}): 1, 2^k, or 2^{2k}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ZeroClass {
    One,
    TwoK,
    Two2k,
}

impl ZeroClass {
    pub fn zero_count(self, k: u32) -> u64 {
        match self {
            ZeroClass::One => 1,
            ZeroClass::TwoK => 1 << k,
            ZeroClass::Two2k => 1 << (2 * k),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AffineReport {
    pub a: Elem,
    pub zero_class: ZeroClass,
    pub zeros: Vec<Elem>,
    /// V_a = c B_n(a) / Z_n(a), present in the one-zero class.
    pub closed_form_zero: Option<Elem>,
    /// Absolute trace bit of each zero, parallel to `zeros`.
    pub traces: Vec<u8>,
    pub c: Elem,
}

/// c with c^{-1} = delta + delta^{-1}; lands in GF(2^k) with Tr_k(c) = 1.
pub fn make_c(field: &Field, tp: &TowerParams, delta: Elem) -> Result<Elem> {
    let c = field.inv(field.add(delta, field.inv(delta)?))?;
    debug_assert!(field.in_subfield(c, tp.k)?);
    debug_assert_eq!(field.trace_between(c, 1, tp.k)?, Elem::ONE);
    Ok(c)
}

/// A_a(x), evaluated.
pub fn eval_a(field: &Field, tp: &TowerParams, a: Elem, c: Elem, x: Elem) -> Elem {
    let k = tp.k;
    let mut acc = field.mul(field.frob(a, k), field.frob(x, 2 * k));
    acc = field.add(acc, field.frob(x, k));
    acc = field.add(acc, field.mul(a, x));
    field.add(acc, c)
}

/// Homogeneous part l_a(x) = a^{2^k} x^{2^{2k}} + x^{2^k} + a x.
pub fn eval_l(field: &Field, tp: &TowerParams, a: Elem, x: Elem) -> Elem {
    let k = tp.k;
    let mut acc = field.mul(field.frob(a, k), field.frob(x, 2 * k));
    acc = field.add(acc, field.frob(x, k));
    field.add(acc, field.mul(a, x))
}

/// Brute-force oracle: all zeros of A_a in GF(2^{nk}), sorted by log index.
pub fn brute_zeros_a(field: &Field, tp: &TowerParams, a: Elem, c: Elem) -> Result<Vec<Elem>> {
    let mut zeros = Vec::new();
    for x in field.subfield_iter(tp.nk())? {
        if eval_a(field, tp, a, c, x).is_zero() {
            zeros.push(x);
        }
    }
    zeros.sort();
    Ok(zeros)
}

/// Brute-force zeros of the homogeneous part l_a.
pub fn l_a_zeros(field: &Field, tp: &TowerParams, a: Elem) -> Result<Vec<Elem>> {
    let mut zeros = Vec::new();
    for x in field.subfield_iter(tp.nk())? {
        if eval_l(field, tp, a, x).is_zero() {
            zeros.push(x);
        }
    }
    zeros.sort();
    Ok(zeros)
}

fn abs_trace_bit(field: &Field, tp: &TowerParams, x: Elem) -> Result<u8> {
    Ok(if field.trace_between(x, 1, tp.nk())? == Elem::ONE {
        1
    } else {
        0
    })
}

/// Classify a by (Z_n(a), B_n(a)) and produce the zeros: closed forms for
/// the one-zero and 2^k-zero classes, brute force for the 2^{2k} class.
pub fn classify_a(field: &Field, tp: &TowerParams, a: Elem, c: Elem) -> Result<AffineReport> {
    if a.is_zero() {
        // A_0(x) = x^{2^k} + c has the unique zero x = c (c is fixed by
        // Frobenius on GF(2^k)).
        return finish_report(field, tp, a, ZeroClass::One, vec![c], Some(c), c);
    }
    let k = tp.k;
    let z = bpoly::z_eval(field, tp, a)?;
    let bn = bpoly::b_eval(field, tp, a, tp.n)?;
    if !z.is_zero() {
        let v = field.mul(c, field.div(bn, z)?);
        return finish_report(field, tp, a, ZeroClass::One, vec![v], Some(v), c);
    }
    if !bn.is_zero() {
        // v_mu = c * sum_{i=0}^{(n-1)/2} B_{n-1}^{2^{(2i+1)k}} / B_n^{2^{(2i+1)k}+2^{2ik}-1}
        //        + mu * B_n,  mu in GF(2^k).
        let bm1 = bpoly::b_eval(field, tp, a, tp.n - 1)?;
        let mut base = Elem::ZERO;
        for i in 0..=(tp.n - 1) / 2 {
            let num = field.frob(bm1, (2 * i + 1) * k);
            let e = (1i64 << ((2 * i + 1) * k)) + (1i64 << (2 * i * k)) - 1;
            base = field.add(base, field.div(num, field.pow(bn, e))?);
        }
        base = field.mul(c, base);
        let mut zeros = Vec::with_capacity(1 << k);
        for mu in field.subfield_iter(k)? {
            zeros.push(field.add(base, field.mul(mu, bn)));
        }
        zeros.sort();
        return finish_report(field, tp, a, ZeroClass::TwoK, zeros, None, c);
    }
    let zeros = brute_zeros_a(field, tp, a, c)?;
    finish_report(field, tp, a, ZeroClass::Two2k, zeros, None, c)
}

fn finish_report(
    field: &Field,
    tp: &TowerParams,
    a: Elem,
    zero_class: ZeroClass,
    zeros: Vec<Elem>,
    closed_form_zero: Option<Elem>,
    c: Elem,
) -> Result<AffineReport> {
    let traces = zeros
        .iter()
        .map(|&z| abs_trace_bit(field, tp, z))
        .collect::<Result<Vec<u8>>>()?;
    Ok(AffineReport {
        a,
        zero_class,
        zeros,
        closed_form_zero,
        traces,
        c,
    })
}

/// The trace pattern of each class: one-zero class matches Tr_k(nc) = Tr_k(c)
/// for odd n, the 2^k class is all-zero, the 2^{2k} class all-one.
pub fn trace_pattern_check(field: &Field, tp: &TowerParams, report: &AffineReport) -> Result<bool> {
    let ok = match report.zero_class {
        ZeroClass::One => {
            // n odd, so nc = c in characteristic 2.
            let target = if field.trace_between(report.c, 1, tp.k)? == Elem::ONE {
                1
            } else {
                0
            };
            report.traces.iter().all(|&t| t == target)
        }
        ZeroClass::TwoK => report.traces.iter().all(|&t| t == 0),
        ZeroClass::Two2k => report.traces.iter().all(|&t| t == 1),
    };
    Ok(ok)
}

/// Per-class totals over GF(2^{nk})*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub one: u64,
    pub two_k: u64,
    pub two_2k: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.one + self.two_k + self.two_2k
    }
}

/// Count classes for every a != 0 from (Z_n, B_n) alone.
pub fn classify_all(field: &Field, tp: &TowerParams) -> Result<ClassCounts> {
    let units: Vec<Elem> = field.subfield_units(tp.nk())?.collect();
    let counts = units
        .par_iter()
        .map(|&a| {
            let z = bpoly::z_eval(field, tp, a).expect("a in subfield");
            let bn = bpoly::b_eval(field, tp, a, tp.n).expect("a in subfield");
            if !z.is_zero() {
                (1u64, 0u64, 0u64)
            } else if !bn.is_zero() {
                (0, 1, 0)
            } else {
                (0, 0, 1)
            }
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    Ok(ClassCounts {
        one: counts.0,
        two_k: counts.1,
        two_2k: counts.2,
    })
}

/// Expected class sizes: |M_1| by subtraction, |M_{2^k}| = 2^{(n-1)k} - 1,
/// |M_{2^{2k}}| = (2^{(n-1)k} - 1)/(2^{2k} - 1).
pub fn expected_class_counts(tp: &TowerParams) -> ClassCounts {
    let (n, k) = (tp.n as u64, tp.k as u64);
    let two_2k = ((1u64 << ((n - 1) * k)) - 1) / ((1 << (2 * k)) - 1);
    let two_k = (1u64 << ((n - 1) * k)) - 1;
    let one = (1u64 << (n * k)) - 1 - two_k - two_2k;
    ClassCounts { one, two_k, two_2k }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BluherCounts {
    pub n0: u64,
    pub n_2k_minus_1: u64,
    pub n_22k_minus_1: u64,
}

/// g_b(x) = b^{2^k} x^{2^{2k}-1} + b^2 x^{2^k-1} + b.
fn eval_g(field: &Field, tp: &TowerParams, b: Elem, x: Elem) -> Elem {
    let k = tp.k as i64;
    let mut acc = field.mul(field.frob(b, tp.k), field.pow(x, (1 << (2 * k)) - 1));
    acc = field.add(acc, field.mul(field.sqr(b), field.pow(x, (1 << k) - 1)));
    field.add(acc, b)
}

/// f_b(x) = x^{2^k+1} + b^2 x + b^2.
fn eval_f(field: &Field, tp: &TowerParams, b: Elem, x: Elem) -> Elem {
    let k = tp.k as i64;
    let b2 = field.sqr(b);
    let mut acc = field.pow(x, (1 << k) + 1);
    acc = field.add(acc, field.mul(b2, x));
    field.add(acc, b2)
}

/// Brute-force counts of b in GF(2^{nk})* by number of zeros of g_b, with
/// the f/g trichotomy asserted per b: f has 0 or 2 zeros iff g has none,
/// f has 1 iff g has 2^k - 1, f has 2^k + 1 iff g has 2^{2k} - 1.
pub fn bluher_counts(field: &Field, tp: &TowerParams) -> Result<BluherCounts> {
    let units: Vec<Elem> = field.subfield_units(tp.nk())?.collect();
    let k = tp.k;
    let totals = units
        .par_iter()
        .map(|&b| {
            let mut g_zeros = 0u64;
            let mut f_zeros = 0u64;
            for x in field.subfield_iter(tp.nk()).expect("valid subfield") {
                if eval_g(field, tp, b, x).is_zero() {
                    g_zeros += 1;
                }
                if eval_f(field, tp, b, x).is_zero() {
                    f_zeros += 1;
                }
            }
            let consistent = match g_zeros {
                0 => f_zeros == 0 || f_zeros == 2,
                z if z == (1 << k) - 1 => f_zeros == 1,
                z if z == (1 << (2 * k)) - 1 => f_zeros == (1 << k) + 1,
                _ => false,
            };
            assert!(consistent, "trichotomy violated at b={b:?}: g={g_zeros}, f={f_zeros}");
            match g_zeros {
                0 => (1u64, 0u64, 0u64),
                z if z == (1 << k) - 1 => (0, 1, 0),
                _ => (0, 0, 1),
            }
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    Ok(BluherCounts {
        n0: totals.0,
        n_2k_minus_1: totals.1,
        n_22k_minus_1: totals.2,
    })
}

pub fn expected_bluher_counts(tp: &TowerParams) -> BluherCounts {
    let exp = expected_class_counts(tp);
    BluherCounts {
        n0: exp.one,
        n_2k_minus_1: exp.two_k,
        n_22k_minus_1: exp.two_2k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: u32, k: u32) -> (Field, TowerParams, Elem) {
        let tp = TowerParams::new(n, k).unwrap();
        let field = Field::new(tp.m, None).unwrap();
        let q = 1u64 << tp.nk();
        let r = field.from_log(((q - 1) << (k - 1)) % (field.p() as u64));
        let delta = field.pow(r, ((q + 1) / ((1 << k) + 1)) as i64);
        let c = make_c(&field, &tp, delta).unwrap();
        (field, tp, c)
    }

    #[test]
    fn c_properties() {
        let (field, tp, c) = setup(3, 2);
        assert!(field.in_subfield(c, tp.k).unwrap());
        assert_eq!(field.trace_between(c, 1, tp.k).unwrap(), Elem::ONE);
        // k=2: the GF(4) elements of absolute trace 1 satisfy c^2 + c + 1 = 0.
        assert_eq!(field.add(field.add(field.sqr(c), c), Elem::ONE), Elem::ZERO);
    }

    #[test]
    fn zero_a_has_unique_zero_c() {
        let (field, tp, c) = setup(3, 2);
        assert_eq!(brute_zeros_a(&field, &tp, Elem::ZERO, c).unwrap(), vec![c]);
    }

    #[test]
    fn closed_forms_match_brute_force() {
        let (field, tp, c) = setup(3, 2);
        for a in field.subfield_iter(tp.nk()).unwrap() {
            let report = classify_a(&field, &tp, a, c).unwrap();
            let brute = brute_zeros_a(&field, &tp, a, c).unwrap();
            assert_eq!(report.zeros, brute, "a={a:?}");
            assert_eq!(report.zeros.len() as u64, report.zero_class.zero_count(tp.k));
            for &z in &report.zeros {
                assert!(eval_a(&field, &tp, a, c, z).is_zero());
            }
        }
    }

    #[test]
    fn class_counts_3_2() {
        let (field, tp, _) = setup(3, 2);
        let counts = classify_all(&field, &tp).unwrap();
        assert_eq!(
            counts,
            ClassCounts {
                one: 47,
                two_k: 15,
                two_2k: 1
            }
        );
        assert_eq!(counts, expected_class_counts(&tp));
        assert_eq!(counts.total(), (1 << tp.nk()) - 1);
    }

    #[test]
    fn trace_patterns() {
        let (field, tp, c) = setup(3, 2);
        for a in field.subfield_iter(tp.nk()).unwrap() {
            let report = classify_a(&field, &tp, a, c).unwrap();
            assert!(trace_pattern_check(&field, &tp, &report).unwrap(), "a={a:?}");
        }
    }

    #[test]
    fn homogeneous_kernel_is_gf2k_space() {
        let (field, tp, _) = setup(3, 2);
        let scalars: Vec<Elem> = field.subfield_iter(tp.k).unwrap().collect();
        for a in field.subfield_units(tp.nk()).unwrap() {
            let zeros = l_a_zeros(&field, &tp, a).unwrap();
            for &u in &zeros {
                for &v in &zeros {
                    assert!(zeros.binary_search(&field.add(u, v)).is_ok());
                }
                for &s in &scalars {
                    assert!(zeros.binary_search(&field.mul(s, u)).is_ok());
                }
            }
        }
    }

    #[test]
    fn prop3_biconditional() {
        // l_a has 2^{2k} zeros iff B_n(a) = 0.
        let (field, tp, _) = setup(3, 2);
        for a in field.subfield_units(tp.nk()).unwrap() {
            let nz = l_a_zeros(&field, &tp, a).unwrap().len() as u64;
            let bn = bpoly::b_eval(&field, &tp, a, tp.n).unwrap();
            assert_eq!(nz == 1 << (2 * tp.k), bn.is_zero(), "a={a:?}");
        }
    }

    #[test]
    fn bluher_counts_3_2() {
        let (field, tp, _) = setup(3, 2);
        let counts = bluher_counts(&field, &tp).unwrap();
        assert_eq!(
            counts,
            BluherCounts {
                n0: 47,
                n_2k_minus_1: 15,
                n_22k_minus_1: 1
            }
        );
        assert_eq!(counts, expected_bluher_counts(&tp));
        // |M_i| = N_{i-1}.
        let classes = classify_all(&field, &tp).unwrap();
        assert_eq!(classes.one, counts.n0);
        assert_eq!(classes.two_k, counts.n_2k_minus_1);
        assert_eq!(classes.two_2k, counts.n_22k_minus_1);
    }
}
