//! The isomaxinf construction against mirrored opponents, then its audit.

use selfembed::adversary::{isomaxinf_run, isomaxinf_verify, AdversaryPair, Fault, MapDouble, TreeDouble};

fn pairs() -> Vec<AdversaryPair> {
    vec![
        AdversaryPair::new("0,0", TreeDouble::Mirror { delay: 2 }, MapDouble::Shift),
        AdversaryPair::new("1,1", TreeDouble::Mirror { delay: 5 }, MapDouble::Shift),
        AdversaryPair::new("2,0", TreeDouble::Tall { delay: 1, stage: 40 }, MapDouble::Shift),
    ]
}

fn main() {
    let run = isomaxinf_run(pairs(), 1000, None);
    for rec in run.trace.iter() {
        for a in rec.acts.iter().filter(|a| a.diag.is_some()) {
            let d = a.diag.as_ref().unwrap();
            println!("stage {}: '{}' turns component {} into {} against {}", rec.stage, a.strategy, d.component, d.new_shape, d.image_shape);
        }
    }
    for c in isomaxinf_verify(&run.trace, 900) {
        println!("{:<18} {:?}", c.name, c.status);
    }
    let broken = isomaxinf_run(pairs(), 1000, Some(Fault { stage: 500 }));
    let failed: Vec<String> = isomaxinf_verify(&broken.trace, 900).into_iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    println!("with a fault at stage 500: {failed:?}");
}
