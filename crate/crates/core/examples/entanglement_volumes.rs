//! Two qubits with energies (0, 1, 1, 2): thermal versus catalytic protection against entangling.

use thermocone::entanglement::{conjecture_report, entanglement_report, p_star, volume_ratio_cn_tn, TwoQubitConfig};
use thermocone::Dist;

fn main() -> thermocone::Result<()> {
    let beta = 0.5;
    let cfg = TwoQubitConfig::new(beta)?;
    let ps = p_star(beta)?;
    println!("p* = {:.5?}", ps.as_slice());

    let q = Dist::new(vec![0.3, 0.3, 0.2, 0.2])?;
    let report = entanglement_report(&q, &cfg, 5000, 1)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serialisable"));

    for b in [0.0, 0.5, 1.0, 2.0] {
        let (tn, cn, ratio) = volume_ratio_cn_tn(b, 20_000, 1)?;
        println!("beta {b:<4} V(TN) {:.4}  V(CN) {:.4}  ratio {ratio:.4}", tn.value, cn.value);
    }
    let c = conjecture_report(beta, 2000, 1)?;
    println!("{}", serde_json::to_string_pretty(&c).expect("serialisable"));
    Ok(())
}
