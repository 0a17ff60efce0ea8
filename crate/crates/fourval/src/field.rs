//! GF(2^m) with full exp/log tables, m <= 24.
//!
//! Every element of every field in the tower GF(2^k) < GF(2^{nk}) < GF(2^{2nk})
//! lives in one `Field` of degree m = 2nk. Elements are stored as log indices
//! relative to a fixed primitive element alpha (the class of x modulo the
//! field modulus), with a sentinel for zero, so multiplication, inversion,
//! Frobenius, trace and norm are all index arithmetic.

use crate::error::{Error, Result};

/// Largest supported extension degree. exp/log tables are 2^m words each.
pub const MAX_M: u32 = 24;

/// One primitive polynomial per degree 2..=24, bit i = coefficient of x^i.
/// Primitivity is re-verified at construction; the table is a convenience,
/// not a trusted input.
const DEFAULT_MODULI: [u32; 23] = [
    0x7,       // 2:  x^2+x+1
    0xB,       // 3:  x^3+x+1
    0x13,      // 4:  x^4+x+1
    0x25,      // 5:  x^5+x^2+1
    0x43,      // 6:  x^6+x+1
    0x83,      // 7:  x^7+x+1
    0x11D,     // 8:  x^8+x^4+x^3+x^2+1
    0x211,     // 9:  x^9+x^4+1
    0x409,     // 10: x^10+x^3+1
    0x805,     // 11: x^11+x^2+1
    0x1053,    // 12: x^12+x^6+x^4+x+1
    0x201B,    // 13: x^13+x^4+x^3+x+1
    0x4443,    // 14: x^14+x^10+x^6+x+1
    0x8003,    // 15: x^15+x+1
    0x1100B,   // 16: x^16+x^12+x^3+x+1
    0x20009,   // 17: x^17+x^3+1
    0x40081,   // 18: x^18+x^7+1
    0x80027,   // 19: x^19+x^5+x^2+x+1
    0x100009,  // 20: x^20+x^3+1
    0x200005,  // 21: x^21+x^2+1
    0x400003,  // 22: x^22+x+1
    0x800021,  // 23: x^23+x^5+1
    0x1000087, // 24: x^24+x^7+x^2+x+1
];

/// Default primitive modulus for a given degree.
pub fn default_modulus(m: u32) -> Result<u32> {
    if !(2..=MAX_M).contains(&m) {
        return Err(Error::UnsupportedDegree(m));
    }
    Ok(DEFAULT_MODULI[(m - 2) as usize])
}

const ZERO_SENTINEL: u32 = u32::MAX;

/// A field element: either zero or the log index of a power of alpha.
/// The index is always reduced modulo 2^m - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(ZERO_SENTINEL);
    pub const ONE: Elem = Elem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == ZERO_SENTINEL
    }

    /// Log index, if nonzero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }
}

/// The integer triple (k, n, m = 2nk) with the derived decimation
/// d = (2^{nk}+1)/(2^k+1) and period p = 2^m - 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerParams {
    pub k: u32,
    pub n: u32,
    pub m: u32,
    pub p: u32,
    pub d: u32,
    pub degenerate_k1: bool,
}

impl TowerParams {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::BadParams(format!("n must be odd and >= 3, got {n}")));
        }
        if k < 1 {
            return Err(Error::BadParams("k must be >= 1".into()));
        }
        let m = 2 * n * k;
        if m > MAX_M {
            return Err(Error::UnsupportedDegree(m));
        }
        let half = 1u64 << (n * k);
        // n odd guarantees (2^k+1) | (2^{nk}+1).
        debug_assert_eq!((half + 1) % ((1 << k) + 1), 0);
        let d = ((half + 1) / ((1 << k) + 1)) as u32;
        if gcd(d as u64, half - 1) != 1 {
            return Err(Error::NonCoprimeDecimation { d: d as u64 });
        }
        Ok(TowerParams {
            k,
            n,
            m,
            p: ((1u64 << m) - 1) as u32,
            d,
            degenerate_k1: k == 1,
        })
    }

    /// Degree of the middle field GF(2^{nk}).
    pub fn nk(&self) -> u32 {
        self.n * self.k
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// GF(2^m) with exp/log tables over a verified primitive modulus.
/// Immutable after construction; all operations are pure.
pub struct Field {
    m: u32,
    p: u32,
    modulus: u32,
    /// exp[i] = bits of alpha^i, for i in 0..p.
    exp: Vec<u32>,
    /// log[bits] = i with exp[i] = bits; log[0] is a sentinel.
    log: Vec<u32>,
}

impl Field {
    /// Build GF(2^m). The modulus (default from the built-in table) is
    /// verified primitive: the powers of x must enumerate all 2^m - 1
    /// nonzero residues and x^p must return to 1.
    pub fn new(m: u32, modulus: Option<u32>) -> Result<Field> {
        if !(2..=MAX_M).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        let modulus = match modulus {
            Some(md) => md,
            None => default_modulus(m)?,
        };
        let nonprim = Error::NonPrimitiveModulus { modulus, m };
        if modulus >> m != 1 {
            // wrong degree cannot be primitive of degree m
            return Err(nonprim);
        }
        let p = ((1u64 << m) - 1) as u32;
        let mut exp = vec![0u32; p as usize];
        let mut log = vec![ZERO_SENTINEL; 1usize << m];
        let top = 1u32 << m;
        let mut cur = 1u32;
        for i in 0..p {
            if cur == 0 || log[cur as usize] != ZERO_SENTINEL {
                // repeated residue before closing the cycle
                return Err(nonprim);
            }
            exp[i as usize] = cur;
            log[cur as usize] = i;
            cur <<= 1;
            if cur & top != 0 {
                cur ^= modulus;
            }
        }
        if cur != 1 {
            return Err(nonprim);
        }
        let field = Field { m, p, modulus, exp, log };
        // Independent primitivity certificate: alpha^{p/r} != 1 for every
        // prime r | p.
        for r in prime_factors(p as u64) {
            if field.pow(Elem(1), (p as u64 / r) as i64) == Elem::ONE {
                return Err(nonprim);
            }
        }
        Ok(field)
    }

    pub fn for_tower(params: &TowerParams, modulus: Option<u32>) -> Result<Field> {
        Field::new(params.m, modulus)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Multiplicative group order 2^m - 1.
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The verified primitive element (the class of x).
    pub fn alpha(&self) -> Elem {
        Elem(1)
    }

    /// Element with the given log index (reduced mod p).
    #[inline]
    pub fn from_log(&self, i: u64) -> Elem {
        Elem((i % self.p as u64) as u32)
    }

    /// Element from its polynomial-basis coefficient bits.
    #[inline]
    pub fn from_bits(&self, bits: u32) -> Elem {
        if bits == 0 {
            Elem::ZERO
        } else {
            debug_assert!(bits < (1 << self.m));
            Elem(self.log[bits as usize])
        }
    }

    /// Polynomial-basis coefficient bits (little-endian: bit i = coeff of x^i).
    #[inline]
    pub fn bits(&self, x: Elem) -> u32 {
        if x.is_zero() {
            0
        } else {
            self.exp[x.0 as usize]
        }
    }

    /// Hex encoding of the little-endian coefficient bitstring.
    pub fn to_hex(&self, x: Elem) -> String {
        let width = (self.m as usize).div_ceil(4);
        format!("{:0width$x}", self.bits(x))
    }

    pub fn from_hex(&self, s: &str) -> Result<Elem> {
        let bits = u32::from_str_radix(s.trim_start_matches("0x"), 16)
            .map_err(|e| Error::BadParams(format!("bad element hex {s:?}: {e}")))?;
        if bits >= 1 << self.m {
            return Err(Error::BadParams(format!("element {s:?} exceeds {} bits", self.m)));
        }
        Ok(self.from_bits(bits))
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.from_bits(self.bits(x) ^ self.bits(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() || y.is_zero() {
            return Elem::ZERO;
        }
        let mut i = x.0 + y.0;
        if i >= self.p {
            i -= self.p;
        }
        Elem(i)
    }

    #[inline]
    pub fn sqr(&self, x: Elem) -> Elem {
        self.mul(x, x)
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Elem(if x.0 == 0 { 0 } else { self.p - x.0 }))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^e, with negative e via inversion; x^0 = 1 for x != 0, 0^e = 0 for e > 0.
    pub fn pow(&self, x: Elem, e: i64) -> Elem {
        if x.is_zero() {
            assert!(e > 0, "pow of zero requires a positive exponent");
            return Elem::ZERO;
        }
        let p = self.p as i64;
        let e = e.rem_euclid(p) as u64;
        Elem(((x.0 as u64 * e) % self.p as u64) as u32)
    }

    /// x^{2^j}, the j-th Frobenius power; frob(x, m) = x.
    #[inline]
    pub fn frob(&self, x: Elem, j: u32) -> Elem {
        if x.is_zero() {
            return Elem::ZERO;
        }
        let j = j % self.m;
        Elem((((x.0 as u64) << j) % self.p as u64) as u32)
    }

    fn check_divisor(&self, l: u32) -> Result<()> {
        if l == 0 || !self.m.is_multiple_of(l) {
            return Err(Error::BadSubfieldDegree { l, m: self.m });
        }
        Ok(())
    }

    /// Tr_l^m(x): the trace from GF(2^m) onto GF(2^l).
    pub fn trace(&self, x: Elem, l: u32) -> Result<Elem> {
        self.check_divisor(l)?;
        Ok(self.trace_steps(x, l, self.m / l))
    }

    /// Tr_l^{lt}(x) for x in GF(2^{lt}), the relative trace inside the tower.
    pub fn trace_between(&self, x: Elem, l: u32, lt: u32) -> Result<Elem> {
        self.check_divisor(lt)?;
        if !lt.is_multiple_of(l) {
            return Err(Error::BadSubfieldDegree { l, m: lt });
        }
        if !self.in_subfield(x, lt)? {
            return Err(Error::ArgNotInSubfield { l: lt });
        }
        Ok(self.trace_steps(x, l, lt / l))
    }

    #[inline]
    fn trace_steps(&self, x: Elem, l: u32, terms: u32) -> Elem {
        let mut acc = 0u32;
        let mut t = x;
        for _ in 0..terms {
            acc ^= self.bits(t);
            t = self.frob(t, l);
        }
        self.from_bits(acc)
    }

    /// Absolute trace Tr_1^m as a bit.
    #[inline]
    pub fn abs_trace_bit(&self, x: Elem) -> u32 {
        match self.trace(x, 1) {
            Ok(Elem::ZERO) => 0,
            _ => 1,
        }
    }

    /// N_l^m(x): the norm onto GF(2^l); x^{(2^m-1)/(2^l-1)} on nonzero x.
    pub fn norm(&self, x: Elem, l: u32) -> Result<Elem> {
        self.check_divisor(l)?;
        if x.is_zero() {
            return Ok(Elem::ZERO);
        }
        let cof = self.p as u64 / ((1u64 << l) - 1);
        Ok(Elem(((x.0 as u64 * cof) % self.p as u64) as u32))
    }

    /// N_l^{lt}(x) for x in GF(2^{lt}).
    pub fn norm_between(&self, x: Elem, l: u32, lt: u32) -> Result<Elem> {
        self.check_divisor(lt)?;
        if !lt.is_multiple_of(l) {
            return Err(Error::BadSubfieldDegree { l, m: lt });
        }
        if !self.in_subfield(x, lt)? {
            return Err(Error::ArgNotInSubfield { l: lt });
        }
        if x.is_zero() {
            return Ok(Elem::ZERO);
        }
        let cof = ((1u64 << lt) - 1) / ((1u64 << l) - 1);
        Ok(Elem(((x.0 as u64 * cof) % self.p as u64) as u32))
    }

    /// True iff x lies in the subfield GF(2^l), i.e. frob(x, l) = x.
    pub fn in_subfield(&self, x: Elem, l: u32) -> Result<bool> {
        self.check_divisor(l)?;
        if x.is_zero() {
            return Ok(true);
        }
        Ok((x.0 as u64 * ((1u64 << l) - 1)).is_multiple_of(self.p as u64))
    }

    /// All 2^l elements of GF(2^l), zero first then powers of alpha^{p/(2^l-1)}.
    pub fn subfield_iter(&self, l: u32) -> Result<impl Iterator<Item = Elem> + '_> {
        self.check_divisor(l)?;
        let cof = self.p as u64 / ((1u64 << l) - 1);
        let count = (1u64 << l) - 1;
        Ok(std::iter::once(Elem::ZERO).chain((0..count).map(move |j| Elem((j * cof % self.p as u64) as u32))))
    }

    /// Nonzero elements of GF(2^l) only.
    pub fn subfield_units(&self, l: u32) -> Result<impl Iterator<Item = Elem> + '_> {
        Ok(self.subfield_iter(l)?.skip(1))
    }
}

/// Distinct prime factors by trial division (arguments stay below 2^24).
pub fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= x {
        if x.is_multiple_of(f) {
            out.push(f);
            while x.is_multiple_of(f) {
                x /= f;
            }
        }
        f += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}
