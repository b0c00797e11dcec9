use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use qk_core::algebras::{hochschild_homology_with, Bimodule, HochschildOptions};
use qk_core::builtins::{builtin_algebra, builtin_group};
use qk_core::comparison::{run_battery, BatteryConfig};
use qk_core::groups::{group_homology_with, BarOptions, ZGRep};
use qk_core::Exec;

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn group_homology(c: &mut Criterion) {
    let mut grp = c.benchmark_group("group_homology");
    for name in ["D4", "Q8"] {
        let g = Arc::new(builtin_group(name).unwrap());
        let m = ZGRep::trivial(g.clone(), 1);
        for (mode, exec) in MODES {
            let opts = BarOptions::default().with_exec(exec);
            grp.bench_function(format!("{name}/{mode}"), |b| {
                b.iter(|| group_homology_with(&g, black_box(&m), 3, &opts).unwrap())
            });
        }
    }
    grp.finish();
}

fn hochschild(c: &mut Criterion) {
    let mut grp = c.benchmark_group("hochschild");
    let a = builtin_algebra("M2(Q)").unwrap();
    let reg = Bimodule::regular(&a);
    for (mode, exec) in MODES {
        let opts = HochschildOptions::default().with_exec(exec);
        grp.bench_function(format!("M2(Q)/{mode}"), |b| {
            b.iter(|| hochschild_homology_with(&a, black_box(&reg), 2, &opts).unwrap())
        });
    }
    grp.finish();
}

fn battery(c: &mut Criterion) {
    let mut grp = c.benchmark_group("battery");
    grp.sample_size(10);
    for (mode, exec) in MODES {
        let cfg = BatteryConfig { exec, ..BatteryConfig::default() };
        grp.bench_function(mode, |b| b.iter(|| run_battery(black_box(&cfg)).unwrap()));
    }
    grp.finish();
}

criterion_group!(benches, group_homology, hochschild, battery);
criterion_main!(benches);
