//! Sweep every decimation at m = 12 and list the four-valued hits; the
//! tower decimation d = 13 shows up annotated with (n,k) = (3,2).

use fourval::field::Field;
use fourval::seq;

fn main() -> fourval::Result<()> {
    let field = Field::new(12, None)?;
    let q1 = (1u64 << 6) - 1;
    let entries = seq::decimation_search(&field, 1..q1)?;

    for e in entries.iter().filter(|e| e.coprime) {
        let flag = if e.four_valued { "  <-- four-valued" } else { "" };
        let tower = e
            .tower_match
            .map(|(n, k)| format!("  (n,k)=({n},{k})"))
            .unwrap_or_default();
        println!("d = {:>2}: {} distinct values{}{}", e.d, e.distinct_values, flag, tower);
    }

    let hits: Vec<u64> = entries.iter().filter(|e| e.four_valued).map(|e| e.d).collect();
    println!("four-valued decimations at m=12: {hits:?}");
    Ok(())
}
