//! Builds the inspection knowledge graph from curated triples plus the
//! reference rule table, queries it and writes DOT and GraphML exports to
//! the system temp directory.

use freqkg::kgraph::{
    export_dot, export_graphml, ingest_triples, parse_triples, query_neighbors, rules_to_graph, save_graph,
    AliasMap, QueryFilter,
};
use freqkg::rules::NamedRule;
use freqkg::txdb::parse_planted_rules;
use freqkg::{NodeKey, NodeLabel, PropertyGraph};

fn data(name: &str) -> std::io::Result<String> {
    std::fs::read_to_string(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let aliases = AliasMap::parse(&data("inspection_aliases.tsv")?)?;
    let triples = aliases.apply(&parse_triples(&data("inspection_triples.tsv")?)?);
    let mut graph = PropertyGraph::new();
    let report = ingest_triples(&mut graph, &triples);
    println!("triples: {report:?}");

    let rules = parse_planted_rules(data("reference_rules.csv")?.as_bytes())?
        .into_iter()
        .map(|r| NamedRule::from_metrics(r.antecedent, r.consequent, r.support, r.confidence, 10_000))
        .collect::<Result<Vec<_>, _>>()?;
    let report = rules_to_graph(&mut graph, &rules);
    println!("rules:   {report:?}");
    println!("graph:   {} nodes, {} edges\n", graph.node_count(), graph.edge_count());

    let start = NodeKey::new(NodeLabel::Equipment, "Distribution transformers");
    let sub = query_neighbors(&graph, &start, 4, &QueryFilter::default())?;
    println!("within 4 hops of {start}:");
    for t in sub.triples() {
        println!("  {t}");
    }

    let lightning = NodeKey::new(NodeLabel::InspectionItem, "Lightning impact test");
    println!("\nrules pointing at {}:", lightning.name);
    for edge in graph.incoming(&lightning) {
        let props = graph.edge(edge).expect("indexed edge exists");
        println!("  {:<40} support {:>7} confidence {:>7}", edge.from.name, props["support"], props["confidence"]);
    }

    let dir = std::env::temp_dir();
    std::fs::write(dir.join("inspection_graph.json"), save_graph(&graph))?;
    std::fs::write(dir.join("inspection_graph.dot"), export_dot(&graph))?;
    std::fs::write(dir.join("inspection_graph.graphml"), export_graphml(&graph))?;
    println!("\nwrote inspection_graph.{{json,dot,graphml}} to {}", dir.display());
    Ok(())
}
