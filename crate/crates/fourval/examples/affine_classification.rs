//! Classify every a in GF(2^6)* by the zero count of
//! A_a(x) = a^4 x^16 + x^4 + a x + c and check the closed forms against
//! brute force.

use fourval::affine;
use fourval::expsum::ExpSumContext;

fn main() -> fourval::Result<()> {
    let ctx = ExpSumContext::new(3, 2, None)?;
    let (field, tp) = (&ctx.field, &ctx.tp);

    let counts = affine::classify_all(field, tp)?;
    println!(
        "zero classes over GF(2^{})*: 1 zero x{}, 2^k zeros x{}, 2^2k zeros x{}",
        tp.nk(),
        counts.one,
        counts.two_k,
        counts.two_2k
    );
    assert_eq!(counts, affine::expected_class_counts(tp));

    // Show the closed-form zeros for a couple of representatives.
    let mut shown = [false; 3];
    for a in field.subfield_units(tp.nk())? {
        let report = affine::classify_a(field, tp, a, ctx.c)?;
        let slot = report.zero_class as usize;
        if shown[slot] {
            continue;
        }
        shown[slot] = true;
        println!(
            "a = {}: {:?}, zeros {:?}, traces {:?}",
            field.to_hex(a),
            report.zero_class,
            report.zeros.iter().map(|&z| field.to_hex(z)).collect::<Vec<_>>(),
            report.traces
        );
        assert_eq!(report.zeros, affine::brute_zeros_a(field, tp, a, ctx.c)?);
        assert!(affine::trace_pattern_check(field, tp, &report)?);
    }

    let bluher = affine::bluher_counts(field, tp)?;
    println!("Bluher counts: {bluher:?}");
    Ok(())
}
