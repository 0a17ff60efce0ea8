//! Decompose (2^k+1) S(a) = S_0(a) + sum_i S_i(a) for a few a and watch the
//! sign resolution pick the right branch in each case.

use fourval::expsum::{CaseTag, ExpSumContext};

fn main() -> fourval::Result<()> {
    let ctx = ExpSumContext::new(3, 2, None)?;

    let mut seen = Vec::new();
    for a in ctx.field.subfield_units(ctx.tp.nk())? {
        let d = ctx.resolve_s(a)?;
        if seen.contains(&(d.case_tag, d.s)) {
            continue;
        }
        seen.push((d.case_tag, d.s));
        println!(
            "a = {}  case {:?}  S_0 = {:>6}  S_1..S_4 = {:?}  =>  S(a) = {}",
            d.a_hex, d.case_tag, d.s0, d.s_i, d.s
        );
    }

    // Case 3 splits on whether one conjugate pair of partial sums goes big.
    let case3: Vec<i64> = seen
        .iter()
        .filter(|(tag, _)| *tag == CaseTag::Case3Znz)
        .map(|&(_, s)| s)
        .collect();
    println!("case-3 values seen: {case3:?} (both signs of 2^nk)");
    Ok(())
}
