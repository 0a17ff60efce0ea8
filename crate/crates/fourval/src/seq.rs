//! The two m-sequences, their cross-correlation C_d(tau), the exponential
//! sum S(a), and correlation spectra.
//!
//! Two independent computation paths are kept first-class:
//! the time-domain path materializes both sequences and accumulates
//! popcounts over XORed windows; the field-domain path evaluates S(a)
//! from trace tables and needs no sequence at all. The multiset identity
//! {C_d(tau)+1} = {S(a)} ties them together.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::{BitVec64, DoubledBits};
use crate::error::{Error, Result};
use crate::field::{gcd, Elem, Field};

/// Whether spectrum values are raw correlations C or the shifted C+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    #[serde(rename = "C")]
    C,
    #[serde(rename = "C+1")]
    CPlus1,
}

/// Multiset "value -> count of shifts (or arguments)".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub m: u32,
    pub d: u64,
    pub convention: Convention,
    pub entries: BTreeMap<i64, u64>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumEntry {
    value: i64,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    m: u32,
    d: u64,
    convention: Convention,
    entries: Vec<SpectrumEntry>,
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumJson {
            m: self.m,
            d: self.d,
            convention: self.convention,
            entries: self
                .entries
                .iter()
                .map(|(v, c)| SpectrumEntry { value: *v, count: *c })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl Spectrum {
    pub fn from_values(m: u32, d: u64, convention: Convention, values: impl IntoIterator<Item = i64>) -> Self {
        let mut entries = BTreeMap::new();
        for v in values {
            *entries.entry(v).or_insert(0) += 1;
        }
        Spectrum { m, d, convention, entries }
    }

    pub fn from_counts(m: u32, d: u64, convention: Convention, counts: &[(i64, u64)]) -> Self {
        Spectrum {
            m,
            d,
            convention,
            entries: counts.iter().copied().collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn num_values(&self) -> usize {
        self.entries.len()
    }

    /// Sum of value * count; equals 1 in the C convention for a full spectrum.
    pub fn power_sum(&self) -> i64 {
        self.entries.iter().map(|(v, c)| v * *c as i64).sum()
    }

    /// Same multiset with every value shifted by `delta` and the convention
    /// relabeled.
    pub fn shifted(&self, delta: i64, convention: Convention) -> Spectrum {
        Spectrum {
            m: self.m,
            d: self.d,
            convention,
            entries: self.entries.iter().map(|(v, c)| (v + delta, *c)).collect(),
        }
    }

    pub fn to_c(&self) -> Spectrum {
        match self.convention {
            Convention::C => self.clone(),
            Convention::CPlus1 => self.shifted(-1, Convention::C),
        }
    }

    pub fn to_c_plus1(&self) -> Spectrum {
        match self.convention {
            Convention::C => self.shifted(1, Convention::CPlus1),
            Convention::CPlus1 => self.clone(),
        }
    }

    /// Multiset equality ignoring metadata.
    pub fn same_values(&self, other: &Spectrum) -> bool {
        self.entries == other.entries
    }

    pub fn to_json(&self) -> String {
        let j = SpectrumJson {
            m: self.m,
            d: self.d,
            convention: self.convention,
            entries: self
                .entries
                .iter()
                .map(|(v, c)| SpectrumEntry { value: *v, count: *c })
                .collect(),
        };
        serde_json::to_string(&j).expect("spectrum serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (v, c) in &self.entries {
            out.push_str(&format!("{v},{c}\n"));
        }
        out
    }
}

/// True iff sum of C values over all shifts equals 1 (C convention only).
pub fn power_sum_check(spectrum: &Spectrum) -> bool {
    spectrum.convention == Convention::C && spectrum.power_sum() == 1
}

/// The pair (s_t, v_t = u_{dt}) of m-sequences, packed bit arrays over one
/// period. s has period 2^m - 1, u and v have period 2^{m/2} - 1, with v
/// extended periodically to the long period for windowed correlation.
pub struct SeqPair<'f> {
    field: &'f Field,
    pub d: u64,
    /// s_t = Tr_m(alpha^t), generated by the modulus recurrence.
    s: BitVec64,
    /// u_t = Tr_{m/2}(beta^t).
    u: BitVec64,
    /// v extended to the long period, doubled for cyclic windows.
    v_ext: DoubledBits,
    half_period: u64,
}

impl<'f> SeqPair<'f> {
    pub fn new(field: &'f Field, d: u64) -> Result<SeqPair<'f>> {
        let m = field.m();
        if !m.is_multiple_of(2) {
            return Err(Error::BadParams(format!("sequence pair needs even m, got {m}")));
        }
        let p = field.p() as u64;
        let q1 = (1u64 << (m / 2)) - 1; // short period 2^{m/2}-1
        if gcd(d, q1) != 1 {
            return Err(Error::NonCoprimeDecimation { d });
        }
        let d = d % q1;

        // s from the linear recurrence of the field modulus, seeded with
        // traces of the first m powers of alpha.
        let mut s = BitVec64::zeros(p as usize);
        for t in 0..m as usize {
            s.set(t, field.abs_trace_bit(field.from_log(t as u64)) == 1);
        }
        let taps: Vec<usize> = (0..m).filter(|i| field.modulus() >> i & 1 == 1).map(|i| i as usize).collect();
        for t in 0..(p as usize - m as usize) {
            let mut bit = false;
            for &i in &taps {
                bit ^= s.get(t + i);
            }
            s.set(t + m as usize, bit);
        }

        // u_t over beta = alpha^{2^{m/2}+1}, absolute trace taken inside the
        // half field.
        let beta_step = (1u64 << (m / 2)) + 1;
        let mut u = BitVec64::zeros(q1 as usize);
        for t in 0..q1 {
            let x = field.from_log(t * beta_step % p);
            u.set(t as usize, field.trace_between(x, 1, m / 2)? != Elem::ZERO);
        }

        // v_t = u_{dt mod q1}, repeated to the long period (q1 divides p).
        let mut v = BitVec64::zeros(p as usize);
        for t in 0..p {
            v.set(t as usize, u.get((t % q1 * d % q1) as usize));
        }

        Ok(SeqPair { field, d, s, u, v_ext: v.doubled(), half_period: q1 })
    }

    pub fn field(&self) -> &Field {
        self.field
    }

    /// Number of shifts, 2^{m/2} - 1.
    pub fn half_period(&self) -> u64 {
        self.half_period
    }

    pub fn s_bit(&self, t: u64) -> bool {
        self.s.get(t as usize)
    }

    pub fn u_bit(&self, t: u64) -> bool {
        self.u.get(t as usize)
    }

    /// C_d(tau) = sum over t of (-1)^{s_t + v_{t+tau}}.
    pub fn cross_correlation(&self, tau: u64) -> Result<i64> {
        if tau >= self.half_period {
            return Err(Error::ShiftOutOfRange { tau, period: self.half_period });
        }
        let p = self.field.p() as i64;
        let disagree = self.v_ext.xor_count_rot(&self.s, tau as usize) as i64;
        Ok(p - 2 * disagree)
    }

    /// Multiset of C_d(tau) over all shifts (C convention).
    pub fn spectrum_direct(&self) -> Spectrum {
        let values: Vec<i64> = (0..self.half_period)
            .map(|tau| self.cross_correlation(tau).expect("tau in range"))
            .collect();
        Spectrum::from_values(self.field.m(), self.d, Convention::C, values)
    }
}

/// Trace tables for the field-domain sum
/// S(a) = sum over x in GF(2^m) of (-1)^{Tr_m(ax) + Tr_{m/2}(x^{d(2^{m/2}+1)})}.
/// Built independently of any sequence: both exponent bits come from direct
/// trace evaluation.
pub struct ExpSumTables<'f> {
    field: &'f Field,
    pub d: u64,
    tr1: DoubledBits,
    g: BitVec64,
    half_period: u64,
}

impl<'f> ExpSumTables<'f> {
    pub fn new(field: &'f Field, d: u64) -> Result<ExpSumTables<'f>> {
        let m = field.m();
        if !m.is_multiple_of(2) {
            return Err(Error::BadParams(format!("exponential sum needs even m, got {m}")));
        }
        let p = field.p() as u64;
        let q1 = (1u64 << (m / 2)) - 1;
        if gcd(d, q1) != 1 {
            return Err(Error::NonCoprimeDecimation { d });
        }
        let d = d % q1;

        let mut tr1 = BitVec64::zeros(p as usize);
        for i in 0..p {
            tr1.set(i as usize, field.abs_trace_bit(field.from_log(i)) == 1);
        }

        // g[t] = Tr_{m/2}(x^{d(2^{m/2}+1)}) for x = alpha^t; the power lands
        // in the half field, where the absolute trace is taken.
        let step = d * ((1u64 << (m / 2)) + 1) % p;
        let half = m / 2;
        let mut g = BitVec64::zeros(p as usize);
        let mut idx = 0u64;
        for t in 0..p {
            let x = field.from_log(idx);
            g.set(t as usize, field.trace_between(x, 1, half)? != Elem::ZERO);
            idx += step;
            if idx >= p {
                idx -= p;
            }
        }

        Ok(ExpSumTables { field, d, tr1: tr1.doubled(), g, half_period: q1 })
    }

    /// S(a) for a nonzero a in GF(2^{m/2}).
    pub fn s_value(&self, a: Elem) -> Result<i64> {
        let half = self.field.m() / 2;
        if a.is_zero() || !self.field.in_subfield(a, half)? {
            return Err(Error::ArgNotInSubfield { l: half });
        }
        let ja = a.log().expect("nonzero") as usize;
        let p = self.field.p() as i64;
        let disagree = self.tr1.xor_count_rot(&self.g, ja) as i64;
        // x = 0 contributes +1.
        Ok(1 + p - 2 * disagree)
    }

    /// Multiset of S(a) over all a in GF(2^{m/2})* (C+1 convention).
    pub fn spectrum(&self) -> Result<Spectrum> {
        let half = self.field.m() / 2;
        let mut values = Vec::with_capacity(self.half_period as usize);
        for a in self.field.subfield_units(half)? {
            values.push(self.s_value(a)?);
        }
        Ok(Spectrum::from_values(self.field.m(), self.d, Convention::CPlus1, values))
    }
}

/// One-off S(a); sweeps should hold on to the tables instead.
pub fn exp_sum_s(field: &Field, d: u64, a: Elem) -> Result<i64> {
    ExpSumTables::new(field, d)?.s_value(a)
}

/// True iff the multiset {C_d(tau)+1} equals the multiset {S(a)}.
pub fn spectrum_equiv_check(pair: &SeqPair) -> Result<bool> {
    let direct = pair.spectrum_direct().to_c_plus1();
    let via_s = ExpSumTables::new(pair.field(), pair.d)?.spectrum()?;
    Ok(direct.same_values(&via_s))
}

/// One row of a decimation search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchEntry {
    pub d: u64,
    pub coprime: bool,
    pub distinct_values: usize,
    pub four_valued: bool,
    /// Set when d equals (2^{nk}+1)/(2^k+1) for some factorization m = 2nk.
    pub tower_match: Option<(u32, u32)>,
    #[serde(skip)]
    pub spectrum: Option<Spectrum>,
}

/// Tower factorizations m = 2nk with n odd > 2 whose decimation reduces to d.
fn tower_annotation(m: u32, d: u64, q1: u64) -> Option<(u32, u32)> {
    let half = m / 2; // = nk
    for n in (3..=half).step_by(2) {
        if !half.is_multiple_of(n) {
            continue;
        }
        let k = half / n;
        let dd = ((1u64 << half) + 1) / ((1u64 << k) + 1);
        if ((1u64 << half) + 1).is_multiple_of((1u64 << k) + 1) && dd % q1 == d % q1 {
            return Some((n, k));
        }
    }
    None
}

/// Sweep decimations, computing the spectrum per coprime d. Uses the direct
/// sequence path up to m = 20 and the S(a) path beyond. Spectra are in the
/// C convention; ordering follows the input range.
pub fn decimation_search(field: &Field, d_range: impl IntoIterator<Item = u64>) -> Result<Vec<SearchEntry>> {
    let m = field.m();
    if !m.is_multiple_of(2) {
        return Err(Error::BadParams(format!("search needs even m, got {m}")));
    }
    let q1 = (1u64 << (m / 2)) - 1;
    let mut out = Vec::new();
    for d in d_range {
        if gcd(d, q1) != 1 {
            out.push(SearchEntry {
                d,
                coprime: false,
                distinct_values: 0,
                four_valued: false,
                tower_match: None,
                spectrum: None,
            });
            continue;
        }
        let spectrum = if m <= 20 {
            SeqPair::new(field, d)?.spectrum_direct()
        } else {
            ExpSumTables::new(field, d)?.spectrum()?.to_c()
        };
        let distinct = spectrum.num_values();
        out.push(SearchEntry {
            d,
            coprime: true,
            distinct_values: distinct,
            four_valued: distinct == 4,
            tower_match: tower_annotation(m, d, q1),
            spectrum: Some(spectrum),
        });
    }
    Ok(out)
}
