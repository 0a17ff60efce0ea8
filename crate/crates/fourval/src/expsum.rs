//! The exponential sums S_0(a), S_i(a), the sign resolution of
//! (2^k+1) S(a) = S_0(a) + sum_i S_i(a), the predicted four-valued
//! distribution, and the end-to-end verification against measured spectra.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::affine;
use crate::bpoly;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, TowerParams};
use crate::linzero;
use crate::seq::{Convention, ExpSumTables, SeqPair, Spectrum};

/// Which of the three proof cases a falls in, read off (B_n(a), Z_n(a)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// B_n(a) = 0 (hence also Z_n(a) = 0): S(a) = -2^{(n+1)k}.
    Case1B0,
    /// Z_n(a) = 0, B_n(a) != 0: S(a) = 0.
    Case2Z0,
    /// Z_n(a) != 0: S(a) = +-2^{nk}.
    Case3Znz,
}

/// S(a) split into its 2^k + 1 partial sums.
#[derive(Debug, Clone, Serialize)]
pub struct SDecomposition {
    pub a_hex: String,
    pub s0: i64,
    /// s_i[j] holds S_{j+1}(a), j = 0..2^k-1.
    pub s_i: Vec<i64>,
    /// Resolved S(a) = (s0 + sum s_i) / (2^k + 1), exactly.
    pub s: i64,
    pub case_tag: CaseTag,
}

/// Everything a sweep needs: the field, the twist r, delta, c, and the two
/// trace bit tables driving the direct sums.
pub struct ExpSumContext {
    pub field: Field,
    pub tp: TowerParams,
    pub r: Elem,
    pub delta: Elem,
    pub c: Elem,
    /// Absolute trace bit of alpha^i, i = 0..p-1.
    tr1: Vec<u8>,
    /// Tr_{nk} bit of alpha^{t(2^{nk}+1)}, t = 0..p-1.
    h: Vec<u8>,
}

impl ExpSumContext {
    pub fn new(n: u32, k: u32, modulus: Option<u32>) -> Result<ExpSumContext> {
        let tp = TowerParams::new(n, k)?;
        let field = Field::for_tower(&tp, modulus)?;
        let p = field.p() as u64;
        let q = 1u64 << tp.nk();

        let r = field.from_log((q - 1) << (k - 1));
        linzero::check_r(&field, &tp, r)?;
        let delta = field.pow(r, ((q + 1) / ((1 << k) + 1)) as i64);
        // delta must have order exactly 2^k + 1 and sit outside GF(2^k).
        if field.pow(delta, (1i64 << k) + 1) != Elem::ONE || field.in_subfield(delta, k)? {
            return Err(Error::BadTwistorR);
        }
        for e in 1..=(1 << k) {
            if field.pow(delta, e) == Elem::ONE {
                return Err(Error::BadTwistorR);
            }
        }
        // Index congruence the sign resolution rests on: ind(r^i) = i mod 2^k+1.
        let r_ind = r.log().expect("r nonzero") as u64;
        for i in 1..=1u64 << (k - 1) {
            assert_eq!(
                i * r_ind % ((1 << k) + 1),
                i % ((1 << k) + 1),
                "index congruence broken; wrong r"
            );
        }
        let c = affine::make_c(&field, &tp, delta)?;

        let mut tr1 = vec![0u8; p as usize];
        for (i, slot) in tr1.iter_mut().enumerate() {
            *slot = field.abs_trace_bit(field.from_log(i as u64)) as u8;
        }
        let mut h = vec![0u8; p as usize];
        let mut idx = 0u64;
        let step = (q + 1) % p;
        for slot in h.iter_mut() {
            let x = field.from_log(idx);
            *slot = (field.trace_between(x, 1, tp.nk())? == Elem::ONE) as u8;
            idx += step;
            if idx >= p {
                idx -= p;
            }
        }
        Ok(ExpSumContext { field, tp, r, delta, c, tr1, h })
    }

    fn check_half_arg(&self, a: Elem) -> Result<()> {
        if !self.field.in_subfield(a, self.tp.nk())? {
            return Err(Error::ArgNotInSubfield { l: self.tp.nk() });
        }
        Ok(())
    }

    /// 1 + sum over t of (-1)^{tr1[start + t(2^k+1)] + h[t]}, the generic
    /// shape of every partial sum; `start` is the log index of the
    /// y^{2^k+1}-coefficient.
    fn signed_sum(&self, start: Option<u64>) -> i64 {
        let p = self.field.p() as u64;
        let Some(start) = start else {
            // zero coefficient: only the h-term survives
            let ones: i64 = self.h.iter().map(|&b| b as i64).sum();
            return 1 + (p as i64 - 2 * ones);
        };
        let step = (1u64 << self.tp.k) + 1;
        let mut idx = start % p;
        let mut disagree = 0i64;
        for &hb in &self.h {
            disagree += (self.tr1[idx as usize] ^ hb) as i64;
            idx += step;
            if idx >= p {
                idx -= p;
            }
        }
        1 + (p as i64 - 2 * disagree)
    }

    /// S_0(a) = sum over y in GF(2^m) of (-1)^{Tr_m(a y^{2^k+1}) + Tr_{nk}(y^{2^{nk}+1})}.
    pub fn s0_direct(&self, a: Elem) -> Result<i64> {
        self.check_half_arg(a)?;
        Ok(self.signed_sum(a.log().map(u64::from)))
    }

    /// S_0(a) = 2^{nk} * signed zero count of A_a (closed form for S_0).
    pub fn s0_via_affine(&self, a: Elem) -> Result<i64> {
        self.check_half_arg(a)?;
        let report = affine::classify_a(&self.field, &self.tp, a, self.c)?;
        let signed: i64 = report.traces.iter().map(|&t| 1 - 2 * t as i64).sum();
        Ok((1i64 << self.tp.nk()) * signed)
    }

    /// S_i(a) for i = 1..2^k: the coefficient is r^{d(i)} a.
    pub fn s_i_direct(&self, a: Elem, i: u32) -> Result<i64> {
        self.check_half_arg(a)?;
        if !(1..=1 << self.tp.k).contains(&i) {
            return Err(Error::BadParams(format!("partial sum index {i} outside 1..={}", 1 << self.tp.k)));
        }
        let coeff = self.field.mul(self.field.pow(self.r, linzero::d_shift(self.tp.k, i)), a);
        Ok(self.signed_sum(coeff.log().map(u64::from)))
    }

    /// Compute all partial sums for a != 0, resolve S(a) both by exact
    /// division and by the modular sign argument, and require agreement.
    pub fn resolve_s(&self, a: Elem) -> Result<SDecomposition> {
        self.check_half_arg(a)?;
        if a.is_zero() {
            return Err(Error::DegenerateArg);
        }
        let tp = &self.tp;
        let k = tp.k;
        let s0 = self.s0_direct(a)?;
        let s_i: Vec<i64> = (1..=1 << k)
            .map(|i| self.s_i_direct(a, i))
            .collect::<Result<_>>()?;
        let total = s0 + s_i.iter().sum::<i64>();
        let divisor = (1i64 << k) + 1;
        if total % divisor != 0 {
            return Err(Error::DivisibilityViolation {
                a_hex: self.field.to_hex(a),
            });
        }
        let s = total / divisor;

        let z = bpoly::z_eval(&self.field, tp, a)?;
        let bn = bpoly::b_eval(&self.field, tp, a, tp.n)?;
        let (case_tag, predicted) = if bn.is_zero() {
            (CaseTag::Case1B0, -(1i64 << ((tp.n + 1) * k)))
        } else if z.is_zero() {
            (CaseTag::Case2Z0, 0)
        } else {
            // At most one conjugate pair of indices carries the big
            // magnitude; present forces epsilon = +1.
            let big = 1i64 << ((tp.n + 1) * k);
            let n_big = s_i.iter().filter(|&&v| v.abs() == big).count();
            let predicted = match n_big {
                0 => -(1i64 << tp.nk()),
                2 => 1i64 << tp.nk(),
                other => {
                    return Err(Error::BadParams(format!(
                        "{other} big partial sums at a={}, expected 0 or 2",
                        self.field.to_hex(a)
                    )))
                }
            };
            (CaseTag::Case3Znz, predicted)
        };
        if s != predicted {
            return Err(Error::BadParams(format!(
                "sign resolution disagrees at a={}: direct {s}, modular {predicted}",
                self.field.to_hex(a)
            )));
        }
        Ok(SDecomposition {
            a_hex: self.field.to_hex(a),
            s0,
            s_i,
            s,
            case_tag,
        })
    }

    /// Decompositions for every a in GF(2^{nk})*.
    pub fn sweep(&self) -> Result<Vec<SDecomposition>> {
        let units: Vec<Elem> = self.field.subfield_units(self.tp.nk())?.collect();
        units.par_iter().map(|&a| self.resolve_s(a)).collect()
    }
}

/// The four predicted (value, count) pairs in the C convention; k >= 2.
pub fn predicted_spectrum(tp: &TowerParams) -> Result<Spectrum> {
    if tp.degenerate_k1 {
        return Err(Error::DegenerateK1);
    }
    let (n, k) = (tp.n as u64, tp.k as u64);
    let q = 1u64 << (n * k);
    let big = 1i64 << ((n + 1) * k);
    let counts = [
        (-1 - big, ((1u64 << ((n - 1) * k)) - 1) / ((1 << (2 * k)) - 1)),
        (-1 - q as i64, (q - 1) * ((1 << (k - 1)) - 1) / ((1 << k) - 1)),
        (-1, (1u64 << ((n - 1) * k)) - 1),
        (-1 + q as i64, (q + 1) * (1 << (k - 1)) / ((1 << k) + 1)),
    ];
    let spectrum = Spectrum::from_counts(tp.m, tp.d as u64, Convention::C, &counts);
    debug_assert_eq!(spectrum.total(), q - 1);
    debug_assert_eq!(spectrum.power_sum(), 1);
    Ok(spectrum)
}

/// The k = 1 degeneration is three-valued: S(a) in {-2^{n+1}, 0, 2^n}.
pub fn k1_spectrum(tp: &TowerParams) -> Result<Spectrum> {
    if !tp.degenerate_k1 {
        return Err(Error::BadParams(format!("k1_spectrum needs k=1, got k={}", tp.k)));
    }
    let n = tp.n as u64;
    let case1 = ((1u64 << (n - 1)) - 1) / 3;
    let case2 = (1u64 << (n - 1)) - 1;
    let rest = (1u64 << n) - 1 - case1 - case2;
    let counts = [
        (-(1i64 << (n + 1)) - 1, case1),
        (-1, case2),
        ((1i64 << n) - 1, rest),
    ];
    Ok(Spectrum::from_counts(tp.m, tp.d as u64, Convention::C, &counts))
}

/// Expected sizes of the three cases, from the B_n/Z_n zero counts.
pub fn expected_case_counts(tp: &TowerParams) -> [u64; 3] {
    let counts = bpoly::expected_zero_counts(tp);
    let case1 = counts.zeros_bn;
    let case2 = counts.zeros_zn - counts.zeros_bn;
    let case3 = (1u64 << tp.nk()) - 1 - case1 - case2;
    [case1, case2, case3]
}

/// The full verification record emitted by the CLI `verify` command.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: u32,
    pub k: u32,
    pub m: u32,
    pub d: u32,
    pub predicted: Spectrum,
    pub measured_sequence: Spectrum,
    pub measured_exp_sum: Spectrum,
    pub resolved: Spectrum,
    pub case_counts: [u64; 3],
    pub expected_case_counts: [u64; 3],
    pub spectra_match: bool,
    pub cases_match: bool,
    pub first_mismatch: Option<String>,
    pub ok: bool,
    pub wall_ms: u64,
}

/// Measure the spectrum on both seqcorr paths, resolve every S(a), and
/// compare everything against the prediction. Mismatches are reported, not
/// panicked on.
pub fn verify_distribution(ctx: &ExpSumContext) -> Result<VerifyReport> {
    let start = Instant::now();
    let tp = &ctx.tp;
    let predicted = if tp.degenerate_k1 {
        k1_spectrum(tp)?
    } else {
        predicted_spectrum(tp)?
    };

    let measured_sequence = SeqPair::new(&ctx.field, tp.d as u64)?.spectrum_direct();
    let measured_exp_sum = ExpSumTables::new(&ctx.field, tp.d as u64)?.spectrum()?.to_c();

    let decomps = ctx.sweep()?;
    let resolved = Spectrum::from_values(
        tp.m,
        tp.d as u64,
        Convention::CPlus1,
        decomps.iter().map(|d| d.s),
    )
    .to_c();

    let mut case_counts = [0u64; 3];
    for d in &decomps {
        match d.case_tag {
            CaseTag::Case1B0 => case_counts[0] += 1,
            CaseTag::Case2Z0 => case_counts[1] += 1,
            CaseTag::Case3Znz => case_counts[2] += 1,
        }
    }
    let expected_cases = expected_case_counts(tp);

    let mut first_mismatch = None;
    let spectra_match = predicted.same_values(&measured_sequence)
        && predicted.same_values(&measured_exp_sum)
        && predicted.same_values(&resolved);
    if !spectra_match {
        for (label, got) in [
            ("sequence", &measured_sequence),
            ("exp-sum", &measured_exp_sum),
            ("resolved", &resolved),
        ] {
            if !predicted.same_values(got) {
                first_mismatch = Some(format!(
                    "{label} spectrum {:?} != predicted {:?}",
                    got.entries, predicted.entries
                ));
                break;
            }
        }
    }
    let cases_match = case_counts == expected_cases;
    if cases_match && first_mismatch.is_none() && !spectra_match {
        first_mismatch = Some("spectra differ".into());
    }
    if !cases_match && first_mismatch.is_none() {
        first_mismatch = Some(format!(
            "case counts {case_counts:?} != expected {expected_cases:?}"
        ));
    }

    let ok = spectra_match && cases_match;
    Ok(VerifyReport {
        n: tp.n,
        k: tp.k,
        m: tp.m,
        d: tp.d,
        predicted,
        measured_sequence,
        measured_exp_sum,
        resolved,
        case_counts,
        expected_case_counts: expected_cases,
        spectra_match,
        cases_match,
        first_mismatch,
        ok,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32, k: u32) -> ExpSumContext {
        ExpSumContext::new(n, k, None).unwrap()
    }

    #[test]
    fn s0_three_valued_by_case_exhaustively() {
        let ctx = ctx(3, 2);
        let tp = &ctx.tp;
        for a in ctx.field.subfield_units(tp.nk()).unwrap() {
            let s0 = ctx.s0_direct(a).unwrap();
            let bn = bpoly::b_eval(&ctx.field, tp, a, tp.n).unwrap();
            let z = bpoly::z_eval(&ctx.field, tp, a).unwrap();
            let expected = if bn.is_zero() {
                -1024
            } else if z.is_zero() {
                256
            } else {
                -64
            };
            assert_eq!(s0, expected, "a={a:?}");
        }
    }

    #[test]
    fn s0_routes_agree() {
        let ctx = ctx(3, 2);
        for a in ctx.field.subfield_iter(ctx.tp.nk()).unwrap() {
            assert_eq!(
                ctx.s0_direct(a).unwrap(),
                ctx.s0_via_affine(a).unwrap(),
                "a={a:?}"
            );
        }
        // a = 0: unique zero x = c with Tr(c) = 1.
        assert_eq!(ctx.s0_direct(Elem::ZERO).unwrap(), -(1 << ctx.tp.nk()));
    }

    #[test]
    fn partial_sum_symmetry_and_square_law() {
        let ctx = ctx(3, 2);
        let tp = &ctx.tp;
        let k = tp.k;
        for a in ctx.field.subfield_units(tp.nk()).unwrap() {
            for j in 1..=1 << (k - 1) {
                assert_eq!(
                    ctx.s_i_direct(a, j).unwrap(),
                    ctx.s_i_direct(a, (1 << k) + 1 - j).unwrap()
                );
            }
            for i in 1..=1 << k {
                let si = ctx.s_i_direct(a, i).unwrap();
                let t = linzero::t_a(&ctx.field, tp, a, ctx.r, i).unwrap();
                assert_eq!(si * si, (1i64 << tp.m) * t as i64, "a={a:?} i={i}");
                assert!(si.abs() == 64 || si.abs() == 256);
            }
        }
    }

    #[test]
    fn cases_one_two_have_uniform_small_sums() {
        let ctx = ctx(3, 2);
        let tp = &ctx.tp;
        for a in ctx.field.subfield_units(tp.nk()).unwrap() {
            if !bpoly::z_eval(&ctx.field, tp, a).unwrap().is_zero() {
                continue;
            }
            for i in 1..=1 << tp.k {
                assert_eq!(ctx.s_i_direct(a, i).unwrap(), -(1 << tp.nk()));
            }
        }
    }

    #[test]
    fn resolved_sweep_matches_frozen_3_2() {
        let ctx = ctx(3, 2);
        let decomps = ctx.sweep().unwrap();
        let resolved = Spectrum::from_values(
            ctx.tp.m,
            ctx.tp.d as u64,
            Convention::CPlus1,
            decomps.iter().map(|d| d.s),
        )
        .to_c();
        let frozen = Spectrum::from_counts(
            12,
            13,
            Convention::C,
            &[(-257, 1), (-65, 21), (-1, 15), (63, 26)],
        );
        assert!(resolved.same_values(&frozen));
    }

    #[test]
    fn predicted_spectra_match_frozen_values() {
        let check = |n, k, frozen: &[(i64, u64)]| {
            let tp = TowerParams::new(n, k).unwrap();
            let predicted = predicted_spectrum(&tp).unwrap();
            assert_eq!(predicted.entries, frozen.iter().copied().collect());
            assert_eq!(predicted.total(), (1 << tp.nk()) - 1);
            assert_eq!(predicted.power_sum(), 1);
        };
        check(3, 2, &[(-257, 1), (-65, 21), (-1, 15), (63, 26)]);
        check(3, 3, &[(-4097, 1), (-513, 219), (-1, 63), (511, 228)]);
        check(5, 2, &[(-4097, 17), (-1025, 341), (-1, 255), (1023, 410)]);
    }

    #[test]
    fn k1_is_three_valued() {
        let tp = TowerParams::new(3, 1).unwrap();
        assert!(matches!(predicted_spectrum(&tp), Err(Error::DegenerateK1)));
        let spectrum = k1_spectrum(&tp).unwrap();
        assert_eq!(
            spectrum.entries,
            [(-17i64, 1u64), (-1, 3), (7, 3)].into_iter().collect()
        );
        assert_eq!(spectrum.power_sum(), 1);
        let report = verify_distribution(&ctx(3, 1)).unwrap();
        assert!(report.ok, "{:?}", report.first_mismatch);
    }

    #[test]
    fn verify_3_2_end_to_end() {
        let report = verify_distribution(&ctx(3, 2)).unwrap();
        assert!(report.ok, "{:?}", report.first_mismatch);
        assert_eq!(report.case_counts, [1, 15, 47]);
    }
}
