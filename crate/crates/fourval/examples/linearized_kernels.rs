//! Count zeros of L_a(z) = z^{2^{(n+1)k}} + r^{2^k} a^{2^k} z^{2^{2k}} + r a z
//! as GF(2)-kernels and watch the 1-or-2^{2k} dichotomy appear.

use fourval::expsum::ExpSumContext;
use fourval::linzero;

fn main() -> fourval::Result<()> {
    let ctx = ExpSumContext::new(3, 2, None)?;
    let (field, tp) = (&ctx.field, &ctx.tp);

    let mut histogram = std::collections::BTreeMap::new();
    for a in field.subfield_units(tp.nk())? {
        for i in 1..=1 << tp.k {
            let t = linzero::t_a(field, tp, a, ctx.r, i)?;
            *histogram.entry(t).or_insert(0u64) += 1;
        }
    }
    println!("T_a histogram over all (a, i): {histogram:?}");
    assert!(histogram.keys().all(|&t| t == 1 || t == 16));

    // A kernel is a GF(2^{2k})-vector space; show one and its closure.
    'outer: for a in field.subfield_units(tp.nk())? {
        let matrix = linzero::build_linear_map(field, tp, a, ctx.r)?;
        if linzero::kernel_count(&matrix) == 1 {
            continue;
        }
        let kernel = linzero::kernel_elements(field, &matrix);
        println!(
            "a = {}: kernel of size {} = {:?}",
            field.to_hex(a),
            kernel.len(),
            kernel.iter().map(|&v| field.to_hex(v)).collect::<Vec<_>>()
        );
        for &v in &kernel {
            for s in field.subfield_iter(2 * tp.k)? {
                assert!(kernel.binary_search(&field.mul(s, v)).is_ok());
            }
        }
        println!("closed under GF(2^{}) scaling", 2 * tp.k);
        // Elimination agrees with trying all 2^m elements.
        assert_eq!(kernel, linzero::brute_kernel(field, tp, a, ctx.r)?);
        println!("matches brute-force enumeration");
        break 'outer;
    }
    Ok(())
}
