//! Randomized invariants for the field layer and the spectrum plumbing,
//! checked against independent oracles (carry-less multiplication for the
//! exp/log tables, naive loops for traces).

use proptest::prelude::*;

use fourval::field::{Elem, Field};
use fourval::seq::{Convention, Spectrum};

/// Schoolbook GF(2)[x] multiplication reduced by the field modulus; knows
/// nothing about the exp/log tables.
fn clmul_reduce(m: u32, modulus: u32, a: u32, b: u32) -> u32 {
    let mut prod = 0u64;
    for i in 0..m {
        if a >> i & 1 == 1 {
            prod ^= (b as u64) << i;
        }
    }
    for bit in (m..2 * m).rev() {
        if prod >> bit & 1 == 1 {
            prod ^= (modulus as u64) << (bit - m);
        }
    }
    prod as u32
}

fn field_and_elems(m: u32) -> impl Strategy<Value = (u32, u32, u32)> {
    let mask = (1u32 << m) - 1;
    (1..=mask, 1..=mask, 0..=mask).prop_map(|(a, b, c)| (a, b, c))
}

proptest! {
    #[test]
    fn mul_matches_carryless_oracle((a, b, _) in field_and_elems(12)) {
        let field = Field::new(12, None).unwrap();
        let product = field.mul(field.from_bits(a), field.from_bits(b));
        prop_assert_eq!(field.bits(product), clmul_reduce(12, field.modulus(), a, b));
    }

    #[test]
    fn add_and_trace_are_additive((a, b, _) in field_and_elems(12)) {
        let field = Field::new(12, None).unwrap();
        let (x, y) = (field.from_bits(a), field.from_bits(b));
        prop_assert_eq!(field.bits(field.add(x, y)), a ^ b);
        let t = |e| field.abs_trace_bit(e);
        prop_assert_eq!(t(field.add(x, y)), t(x) ^ t(y));
    }

    #[test]
    fn frobenius_is_a_field_automorphism((a, b, _) in field_and_elems(12), j in 0u32..12) {
        let field = Field::new(12, None).unwrap();
        let (x, y) = (field.from_bits(a), field.from_bits(b));
        prop_assert_eq!(
            field.frob(field.mul(x, y), j),
            field.mul(field.frob(x, j), field.frob(y, j))
        );
        prop_assert_eq!(
            field.frob(field.add(x, y), j),
            field.add(field.frob(x, j), field.frob(y, j))
        );
        prop_assert_eq!(field.frob(x, 12), x);
    }

    #[test]
    fn inverse_roundtrips((a, _, _) in field_and_elems(12)) {
        let field = Field::new(12, None).unwrap();
        let x = field.from_bits(a);
        prop_assert_eq!(field.mul(x, field.inv(x).unwrap()), Elem::ONE);
    }

    #[test]
    fn hex_roundtrips((a, _, _) in field_and_elems(12)) {
        let field = Field::new(12, None).unwrap();
        let x = field.from_bits(a);
        prop_assert_eq!(field.from_hex(&field.to_hex(x)).unwrap(), x);
    }

    #[test]
    fn spectrum_is_order_independent(mut values in proptest::collection::vec(-300i64..300, 1..200)) {
        let forward = Spectrum::from_values(12, 13, Convention::C, values.iter().copied());
        values.reverse();
        let backward = Spectrum::from_values(12, 13, Convention::C, values.iter().copied());
        prop_assert!(forward.same_values(&backward));
        prop_assert_eq!(forward.to_c_plus1().to_c().entries, forward.entries);
    }
}
