use criterion::{black_box, criterion_group, criterion_main, Criterion};
use modchain::complex::{order_complex, reduced_betti};
use modchain::construct::constructive_vd_skeleton;
use modchain::groups;
use modchain::labeling::{left_modular_labeling, min_chain_complexity, verify_quasi_el};
use modchain::morse::{morse_report, DEFAULT_CHAIN_LIMIT};
use modchain::families;

fn labeling(c: &mut Criterion) {
    let pi4 = families::pi4();
    let m = pi4.verify_chain_by_name(&families::PI4_CHAIN).unwrap();
    let lab = left_modular_labeling(&pi4, &m).unwrap();
    c.bench_function("verify_quasi_el/pi4", |b| b.iter(|| verify_quasi_el(black_box(pi4.poset()), &lab).unwrap()));
    c.bench_function("morse_report/pi4", |b| b.iter(|| morse_report(black_box(pi4.poset()), &lab, DEFAULT_CHAIN_LIMIT).unwrap()));
}

fn subgroup_lattices(c: &mut Criterion) {
    let s4 = groups::symmetric(4);
    c.bench_function("subgroup_lattice/S4", |b| b.iter(|| groups::subgroup_lattice(black_box(&s4), 360).unwrap()));
    let gl = groups::subgroup_lattice(&s4, 360).unwrap();
    let lab = gl.chief_labeling().unwrap();
    let (r, _) = min_chain_complexity(gl.poset(), &lab).unwrap();
    c.bench_function("constructive_vd_skeleton/L(S4)", |b| b.iter(|| constructive_vd_skeleton(black_box(gl.poset()), &lab, r).unwrap()));
    let complex = order_complex(gl.poset()).unwrap();
    c.bench_function("reduced_betti/L(S4)", |b| b.iter(|| reduced_betti(black_box(&complex), 2_000_000).unwrap()));
}

fn nonsolvable(c: &mut Criterion) {
    let mut group = c.benchmark_group("nonsolvable");
    group.sample_size(10);
    let a5 = groups::alternating(5);
    group.bench_function("subgroup_lattice/A5", |b| b.iter(|| groups::subgroup_lattice(black_box(&a5), 360).unwrap()));
    let gl = groups::subgroup_lattice(&a5, 360).unwrap();
    group.bench_function("skeleton_criterion/A5", |b| {
        b.iter(|| groups::skeleton_shellability_criterion(black_box(&gl), 2_000_000).unwrap())
    });
    group.finish();
}

criterion_group!(benches, labeling, subgroup_lattices, nonsolvable);
criterion_main!(benches);
