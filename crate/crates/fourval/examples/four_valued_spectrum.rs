//! Measure the cross-correlation spectrum at (n,k) = (3,2) on both paths
//! and compare with the predicted four-valued distribution.

use fourval::expsum::{self, ExpSumContext};
use fourval::seq::{ExpSumTables, SeqPair};

fn main() -> fourval::Result<()> {
    let ctx = ExpSumContext::new(3, 2, None)?;
    let d = ctx.tp.d as u64;

    // Path 1: actually correlate the two sequences over all shifts.
    let pair = SeqPair::new(&ctx.field, d)?;
    let measured = pair.spectrum_direct();
    println!("sequence path:   {}", measured.to_json());

    // Path 2: never build a sequence; evaluate S(a) from trace tables.
    let via_s = ExpSumTables::new(&ctx.field, d)?.spectrum()?.to_c();
    println!("exp-sum path:    {}", via_s.to_json());

    let predicted = expsum::predicted_spectrum(&ctx.tp)?;
    println!("predicted:       {}", predicted.to_json());

    assert!(measured.same_values(&via_s));
    assert!(measured.same_values(&predicted));
    assert_eq!(measured.power_sum(), 1); // sum of C over all shifts
    println!("all three agree; power sum = 1");
    Ok(())
}
