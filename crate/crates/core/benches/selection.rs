//! Parallel versus sequential cost of model building and EMIG-U.
//!
//! With the `parallel` feature the same work runs on the default rayon
//! pool and on a one-thread pool; without it, only the sequential build
//! is measured.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tagim::community::CommunityPartition;
use tagim::diffusion::{MiaModel, DEFAULT_THETA};
use tagim::graph::{NodeCosts, TagCatalog, TagGraph};
use tagim::harness::{generate_costs, synth, SynthConfig};
use tagim::prob::assign_trivalency;
use tagim::selection::{emig_u, Instance, ObjectiveKind, SelectionConfig};

struct Fixture {
    graph: TagGraph,
    catalog: TagCatalog,
    costs: NodeCosts,
    partition: CommunityPartition,
}

fn fixture(nodes: usize) -> Fixture {
    let config = SynthConfig {
        nodes,
        mean_out_degree: 3.0,
        ..Default::default()
    };
    let (data, labels) = synth::generate(&config).unwrap();
    let graph = assign_trivalency(&data.graph, 0);
    let (costs, tag_costs) = generate_costs(nodes, graph.tag_count(), 0);
    Fixture {
        catalog: TagCatalog::new(data.counts, tag_costs).unwrap(),
        costs,
        partition: CommunityPartition::from_assignment(&labels),
        graph,
    }
}

fn workload(f: &Fixture) {
    let tags: Vec<usize> = (0..20).collect();
    let w = f.graph.materialize(&tags).unwrap();
    std::hint::black_box(MiaModel::build(&w, DEFAULT_THETA).unwrap());
    let instance = Instance {
        graph: &f.graph,
        catalog: &f.catalog,
        costs: &f.costs,
        partition: &f.partition,
    };
    std::hint::black_box(
        emig_u(
            instance,
            4000.0,
            &ObjectiveKind::Influence,
            &SelectionConfig::default(),
        )
        .unwrap(),
    );
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("mia+emig-u");
    group.sample_size(10);
    for nodes in [500, 2000] {
        let f = fixture(nodes);
        #[cfg(feature = "parallel")]
        {
            let single = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap();
            group.bench_with_input(BenchmarkId::new("rayon-1-thread", nodes), &f, |b, f| {
                b.iter(|| single.install(|| workload(f)))
            });
            group.bench_with_input(BenchmarkId::new("rayon-default", nodes), &f, |b, f| {
                b.iter(|| workload(f))
            });
        }
        #[cfg(not(feature = "parallel"))]
        group.bench_with_input(BenchmarkId::new("sequential", nodes), &f, |b, f| {
            b.iter(|| workload(f))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
