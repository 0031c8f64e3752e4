mod corpus;

use critgraph::Graph;

#[test]
fn corpus_counts() {
    let expected = [0usize, 1, 1, 2, 6, 21, 112, 853, 11117];
    for n in 1..=8 {
        assert_eq!(corpus::connected_graphs(n).len(), expected[n], "n={n}");
    }
}

#[test]
#[ignore]
fn probe_critical_catalog() {
    let t = std::time::Instant::now();
    for n in 3..=9 {
        let crit = corpus::delta_critical_graphs(n);
        println!("n={n}: {} delta-critical ({:?})", crit.len(), t.elapsed());
        if n <= 7 {
            for line in crit {
                let g = Graph::from_graph6(line).unwrap();
                println!("   {line} (delta={}, m={})", g.max_degree(), g.m());
            }
        }
    }
    println!("C3 canon: {}", corpus::canon_of(&Graph::cycle(3)));
    println!("C5 canon: {}", corpus::canon_of(&Graph::cycle(5)));
    println!("C7 canon: {}", corpus::canon_of(&Graph::cycle(7)));
    println!("K5 canon: {}", corpus::canon_of(&Graph::complete(5)));
    println!("K5-e canon: {}", corpus::canon_of(&Graph::complete(5).delete_edge(3,4).unwrap()));
    let split = Graph::complete(4).split_vertex(0, &critgraph::VertexPartition::new(vec![1], vec![2,3])).unwrap();
    println!("splitK4 canon: {}", corpus::canon_of(&split));
}
