//! The variant-formula cross-check: alternative closed forms for catalog
//! quantities evaluated against the differentiation oracle.

use quasiconf::audit::audit_variant_formulas;

fn main() {
    for audit in audit_variant_formulas() {
        println!("{}", audit.id);
        println!("  region:             {}", audit.region);
        println!("  sup deviation:      {:.4e}  ({} points)", audit.sup_deviation, audit.points);
        println!("  oracle consistency: {:.4e}", audit.oracle_consistency);
        println!("  distinct:           {}", audit.distinct);
        println!("  {}", audit.detail);
        println!();
    }
}
