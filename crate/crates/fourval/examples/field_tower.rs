//! Build the tower GF(2^2) < GF(2^6) < GF(2^12) and poke at trace, norm,
//! and subfield membership.

use fourval::field::{Field, TowerParams};

fn main() -> fourval::Result<()> {
    let tp = TowerParams::new(3, 2)?;
    let field = Field::for_tower(&tp, None)?;
    println!(
        "GF(2^{}) with modulus {:#x}, decimation d = {}",
        tp.m,
        field.modulus(),
        tp.d
    );

    let alpha = field.alpha();
    println!("alpha = {}", field.to_hex(alpha));

    // Tr_m collapses on the half field; the relative trace does not.
    let beta = field.pow(alpha, ((1 << tp.nk()) + 1) as i64); // generates GF(2^{nk})
    println!(
        "beta in GF(2^{})? {}   Tr_1^m(beta) = {}   Tr_1^nk(beta) = {}",
        tp.nk(),
        field.in_subfield(beta, tp.nk())?,
        field.abs_trace_bit(beta),
        u32::from(!field.trace_between(beta, 1, tp.nk())?.is_zero())
    );

    // Norm down the tower lands in the base field.
    let norm = field.norm_between(beta, tp.k, tp.nk())?;
    println!(
        "N_k^nk(beta) = {} (in GF(2^{})? {})",
        field.to_hex(norm),
        tp.k,
        field.in_subfield(norm, tp.k)?
    );

    // Transitivity: Tr_1^m = Tr_1^k . Tr_k^nk . Tr_nk^m on any element.
    let x = field.pow(alpha, 1234);
    let step = field.trace_between(
        field.trace_between(field.trace_between(x, tp.nk(), tp.m)?, tp.k, tp.nk())?,
        1,
        tp.k,
    )?;
    assert_eq!(field.abs_trace_bit(x) == 1, !step.is_zero());
    println!("trace transitivity holds at {}", field.to_hex(x));
    Ok(())
}
