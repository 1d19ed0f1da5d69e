//! Programmatic reproducibility audit with a CSV report.

use repro_interval::audit::{emit_report, run_audit, Kernel, ReportFormat, TrialConfig};

fn main() -> repro_interval::Result<()> {
    for kernel in [Kernel::SumNaive, Kernel::SumPrerounded, Kernel::Imm4] {
        let n = if kernel == Kernel::Imm4 { 8 } else { 2000 };
        let mut cfg = TrialConfig::new(kernel, n);
        cfg.trials = 6;
        let report = run_audit(&cfg)?;
        println!(
            "{kernel}: reproducible {}, inclusion {:?}, spread {} ulp, contract held {}",
            report.bitwise_reproducible,
            report.inclusion_held,
            report.spread_ulps,
            report.contract_held()
        );
        if kernel == Kernel::Imm4 {
            print!("{}", emit_report(&report, ReportFormat::Csv)?);
        }
    }
    Ok(())
}
