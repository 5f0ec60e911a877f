//! Embedded labeled property graph for the inspection knowledge base.
//!
//! Nodes are keyed by `(label, normalized name)`; edges by
//! `(from, relation, to)`. Both carry string key/value properties. All
//! collections are ordered maps, so iteration, persistence and exports are
//! deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rules::{percent, NamedRule};
use crate::txdb::normalize_name;

/// Relation used for edges derived from association rules.
pub const RELATED_ITEMS: &str = "Related items";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no node {0}")]
    UnknownNode(NodeKey),
    #[error("malformed graph document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeLabel {
    Equipment,
    Component,
    InspectionItem,
    InspectionIndex,
    DefectCause,
    DefectType,
}

impl NodeLabel {
    pub const ALL: [NodeLabel; 6] = [
        NodeLabel::Equipment,
        NodeLabel::Component,
        NodeLabel::InspectionItem,
        NodeLabel::InspectionIndex,
        NodeLabel::DefectCause,
        NodeLabel::DefectType,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeLabel::Equipment => "Equipment",
            NodeLabel::Component => "Component",
            NodeLabel::InspectionItem => "InspectionItem",
            NodeLabel::InspectionIndex => "InspectionIndex",
            NodeLabel::DefectCause => "DefectCause",
            NodeLabel::DefectType => "DefectType",
        }
    }

    /// Fill color used by the DOT export.
    pub fn color(self) -> &'static str {
        match self {
            NodeLabel::Equipment => "#8dd3c7",
            NodeLabel::Component => "#ffffb3",
            NodeLabel::InspectionItem => "#bebada",
            NodeLabel::InspectionIndex => "#fb8072",
            NodeLabel::DefectCause => "#80b1d3",
            NodeLabel::DefectType => "#fdb462",
        }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeLabel {
    type Err = String;

    /// Accepts the canonical names case-insensitively, ignoring spaces,
    /// `_` and `-`, plus the entity-type headings used in inspection
    /// ontologies ("Inspection items", "Cause of defect", ...). Related
    /// inspection items are plain inspection items.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '-'))
            .flat_map(char::to_lowercase)
            .collect();
        Ok(match key.as_str() {
            "equipment" => NodeLabel::Equipment,
            "component" | "components" => NodeLabel::Component,
            "inspectionitem" | "inspectionitems" | "relatedinspectionitem" | "relatedinspectionitems" => {
                NodeLabel::InspectionItem
            }
            "inspectionindex" | "inspectionindicator" | "inspectionindicators" => NodeLabel::InspectionIndex,
            "defectcause" | "causeofdefect" => NodeLabel::DefectCause,
            "defecttype" | "typeofdefect" => NodeLabel::DefectType,
            _ => return Err(format!("unknown node label {s:?}")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeKey {
    pub label: NodeLabel,
    pub name: String,
}

impl NodeKey {
    pub fn new(label: NodeLabel, name: &str) -> Self {
        NodeKey {
            label,
            name: normalize_name(name),
        }
    }
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.label, self.name)
    }
}

impl FromStr for NodeKey {
    type Err = String;

    /// Parses `label:name`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (label, name) = s.split_once(':').ok_or_else(|| format!("expected label:name, got {s:?}"))?;
        let key = NodeKey::new(label.parse()?, name);
        if key.name.is_empty() {
            return Err("node name is empty".into());
        }
        Ok(key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub from: NodeKey,
    pub relation: String,
    pub to: NodeKey,
}

pub type Properties = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub head: String,
    pub relation: String,
    pub tail: String,
    pub head_label: NodeLabel,
    pub tail_label: NodeLabel,
}

impl Triple {
    pub fn head_key(&self) -> NodeKey {
        NodeKey::new(self.head_label, &self.head)
    }

    pub fn tail_key(&self) -> NodeKey {
        NodeKey::new(self.tail_label, &self.tail)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}",
            self.head, self.relation, self.tail, self.head_label, self.tail_label
        )
    }
}

/// Parses tab-separated triples: head, relation, tail, head label, tail
/// label. Blank lines and lines starting with `#` are skipped.
pub fn parse_triples(text: &str) -> Result<Vec<Triple>, GraphError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.trim_end_matches('\r').split('\t').collect();
        if fields.len() != 5 {
            return Err(GraphError::Parse {
                line,
                message: format!("expected 5 tab-separated fields, found {}", fields.len()),
            });
        }
        let text_fields: Vec<String> = fields[..3].iter().map(|f| normalize_name(f)).collect();
        if text_fields.iter().any(String::is_empty) {
            return Err(GraphError::Parse {
                line,
                message: "head, relation and tail must be non-empty".into(),
            });
        }
        let label = |s: &str| s.parse::<NodeLabel>().map_err(|message| GraphError::Parse { line, message });
        let [head, relation, tail]: [String; 3] = text_fields.try_into().expect("three fields");
        out.push(Triple {
            head,
            relation,
            tail,
            head_label: label(fields[3])?,
            tail_label: label(fields[4])?,
        });
    }
    Ok(out)
}

/// Name merges applied to triples before ingestion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasMap {
    map: BTreeMap<String, String>,
}

impl AliasMap {
    /// Parses `alias TAB canonical` lines; `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((alias, canonical)) = raw.split_once('\t') else {
                return Err(GraphError::Parse {
                    line: i + 1,
                    message: "expected alias<TAB>canonical".into(),
                });
            };
            let (alias, canonical) = (normalize_name(alias), normalize_name(canonical));
            if alias.is_empty() || canonical.is_empty() {
                return Err(GraphError::Parse {
                    line: i + 1,
                    message: "empty alias or canonical name".into(),
                });
            }
            map.insert(alias, canonical);
        }
        Ok(AliasMap { map })
    }

    pub fn resolve<'a>(&'a self, name: &'a str) -> &'a str {
        self.map.get(name).map_or(name, String::as_str)
    }

    pub fn apply(&self, triples: &[Triple]) -> Vec<Triple> {
        triples
            .iter()
            .map(|t| Triple {
                head: self.resolve(&t.head).to_string(),
                tail: self.resolve(&t.tail).to_string(),
                ..t.clone()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub nodes_added: usize,
    pub edges_added: usize,
    pub edges_updated: usize,
    pub duplicates_skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeUpsert {
    Added,
    Updated,
    Unchanged,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyGraph {
    nodes: BTreeMap<NodeKey, Properties>,
    edges: BTreeMap<EdgeKey, Properties>,
    outgoing: BTreeMap<NodeKey, BTreeSet<EdgeKey>>,
    incoming: BTreeMap<NodeKey, BTreeSet<EdgeKey>>,
}

impl PropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, key: &NodeKey) -> bool {
        self.nodes.contains_key(key)
    }

    pub fn node(&self, key: &NodeKey) -> Option<&Properties> {
        self.nodes.get(key)
    }

    pub fn edge(&self, key: &EdgeKey) -> Option<&Properties> {
        self.edges.get(key)
    }

    /// Nodes ordered by (label, name).
    pub fn nodes(&self) -> impl Iterator<Item = (&NodeKey, &Properties)> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeKey, &Properties)> {
        self.edges.iter()
    }

    pub fn outgoing(&self, key: &NodeKey) -> impl Iterator<Item = &EdgeKey> {
        self.outgoing.get(key).into_iter().flatten()
    }

    pub fn incoming(&self, key: &NodeKey) -> impl Iterator<Item = &EdgeKey> {
        self.incoming.get(key).into_iter().flatten()
    }

    /// Inserts a node if absent and merges `properties` into it. Returns
    /// true when the node is new.
    pub fn add_node(&mut self, key: NodeKey, properties: Properties) -> bool {
        let added = !self.nodes.contains_key(&key);
        self.nodes.entry(key.clone()).or_default().extend(properties);
        if added {
            self.outgoing.entry(key.clone()).or_default();
            self.incoming.entry(key).or_default();
        }
        added
    }

    fn upsert_edge(&mut self, key: EdgeKey, properties: Properties) -> Result<EdgeUpsert, GraphError> {
        for end in [&key.from, &key.to] {
            if !self.nodes.contains_key(end) {
                return Err(GraphError::UnknownNode(end.clone()));
            }
        }
        if let Some(existing) = self.edges.get_mut(&key) {
            let before = existing.clone();
            existing.extend(properties);
            return Ok(if *existing == before {
                EdgeUpsert::Unchanged
            } else {
                EdgeUpsert::Updated
            });
        }
        self.outgoing.entry(key.from.clone()).or_default().insert(key.clone());
        self.incoming.entry(key.to.clone()).or_default().insert(key.clone());
        self.edges.insert(key, properties);
        Ok(EdgeUpsert::Added)
    }

    /// Adds or updates the edge `(from, relation, to)`; both endpoints must
    /// exist. Returns true when the edge is new.
    pub fn add_edge(
        &mut self,
        from: NodeKey,
        relation: &str,
        to: NodeKey,
        properties: Properties,
    ) -> Result<bool, GraphError> {
        let key = EdgeKey {
            from,
            relation: normalize_name(relation),
            to,
        };
        Ok(self.upsert_edge(key, properties)? == EdgeUpsert::Added)
    }

    /// Every edge as a triple, in edge-key order.
    pub fn triples(&self) -> Vec<Triple> {
        self.edges
            .keys()
            .map(|e| Triple {
                head: e.from.name.clone(),
                relation: e.relation.clone(),
                tail: e.to.name.clone(),
                head_label: e.from.label,
                tail_label: e.to.label,
            })
            .collect()
    }
}

/// Adds the triples' nodes and edges, deduplicating by key.
pub fn ingest_triples(graph: &mut PropertyGraph, triples: &[Triple]) -> IngestReport {
    let mut report = IngestReport::default();
    for t in triples {
        let (head, tail) = (t.head_key(), t.tail_key());
        report.nodes_added += graph.add_node(head.clone(), Properties::new()) as usize;
        report.nodes_added += graph.add_node(tail.clone(), Properties::new()) as usize;
        let key = EdgeKey {
            from: head,
            relation: normalize_name(&t.relation),
            to: tail,
        };
        match graph.upsert_edge(key, Properties::new()).expect("endpoints were just added") {
            EdgeUpsert::Added => report.edges_added += 1,
            EdgeUpsert::Updated => report.edges_updated += 1,
            EdgeUpsert::Unchanged => report.duplicates_skipped += 1,
        }
    }
    report
}

/// Adds a directed "Related items" edge A→B between inspection-item nodes
/// for each rule, carrying its metrics. Multi-item rules are expanded into
/// every antecedent/consequent pair, tagged with a `derived_from` property.
pub fn rules_to_graph(graph: &mut PropertyGraph, rules: &[NamedRule]) -> IngestReport {
    let mut report = IngestReport::default();
    for rule in rules {
        let mut props = Properties::new();
        props.insert("support".into(), percent(rule.support));
        props.insert("confidence".into(), percent(rule.confidence));
        if let Some(lift) = rule.lift {
            props.insert("lift".into(), format!("{lift:.2}"));
        }
        if rule.size() > 2 {
            props.insert(
                "derived_from".into(),
                format!("{} => {}", rule.antecedent.join(", "), rule.consequent.join(", ")),
            );
        }
        for a in &rule.antecedent {
            for b in &rule.consequent {
                let from = NodeKey::new(NodeLabel::InspectionItem, a);
                let to = NodeKey::new(NodeLabel::InspectionItem, b);
                report.nodes_added += graph.add_node(from.clone(), Properties::new()) as usize;
                report.nodes_added += graph.add_node(to.clone(), Properties::new()) as usize;
                let key = EdgeKey {
                    from,
                    relation: RELATED_ITEMS.into(),
                    to,
                };
                match graph.upsert_edge(key, props.clone()).expect("endpoints were just added") {
                    EdgeUpsert::Added => report.edges_added += 1,
                    EdgeUpsert::Updated => report.edges_updated += 1,
                    EdgeUpsert::Unchanged => report.duplicates_skipped += 1,
                }
            }
        }
    }
    report
}

/// Optional restrictions for [`query_neighbors`].
#[derive(Debug, Clone, Default)]
pub struct QueryFilter {
    pub labels: Option<BTreeSet<NodeLabel>>,
    pub relations: Option<BTreeSet<String>>,
}

/// Breadth-first neighborhood of `start` up to `depth` hops, following edges
/// in both directions. Returns the visited nodes and the traversed edges.
pub fn query_neighbors(
    graph: &PropertyGraph,
    start: &NodeKey,
    depth: usize,
    filter: &QueryFilter,
) -> Result<PropertyGraph, GraphError> {
    let Some(props) = graph.node(start) else {
        return Err(GraphError::UnknownNode(start.clone()));
    };
    let mut sub = PropertyGraph::new();
    sub.add_node(start.clone(), props.clone());
    let mut traversed = Vec::new();
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    while let Some((key, dist)) = queue.pop_front() {
        if dist == depth {
            continue;
        }
        let edges = graph.outgoing(&key).map(|e| (e, &e.to)).chain(graph.incoming(&key).map(|e| (e, &e.from)));
        for (edge, other) in edges {
            if filter.relations.as_ref().is_some_and(|r| !r.contains(&edge.relation)) {
                continue;
            }
            if filter.labels.as_ref().is_some_and(|l| !l.contains(&other.label)) {
                continue;
            }
            if sub.add_node(other.clone(), graph.nodes[other].clone()) {
                queue.push_back((other.clone(), dist + 1));
            }
            traversed.push(edge.clone());
        }
    }
    for edge in traversed {
        let props = graph.edges[&edge].clone();
        sub.upsert_edge(edge, props).expect("both endpoints were visited");
    }
    Ok(sub)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    label: NodeLabel,
    name: String,
    #[serde(default)]
    properties: Properties,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EndpointDoc {
    label: NodeLabel,
    name: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: EndpointDoc,
    relation: String,
    to: EndpointDoc,
    #[serde(default)]
    properties: Properties,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

/// Serializes to the graph JSON document, LF-terminated.
pub fn save_graph(graph: &PropertyGraph) -> String {
    let endpoint = |k: &NodeKey| EndpointDoc {
        label: k.label,
        name: k.name.clone(),
    };
    let doc = GraphDoc {
        nodes: graph
            .nodes()
            .map(|(k, p)| NodeDoc {
                label: k.label,
                name: k.name.clone(),
                properties: p.clone(),
            })
            .collect(),
        edges: graph
            .edges()
            .map(|(e, p)| EdgeDoc {
                from: endpoint(&e.from),
                relation: e.relation.clone(),
                to: endpoint(&e.to),
                properties: p.clone(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("graph document always serializes");
    out.push('\n');
    out
}

pub fn load_graph(text: &str) -> Result<PropertyGraph, GraphError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| GraphError::Document(e.to_string()))?;
    let mut graph = PropertyGraph::new();
    for node in doc.nodes {
        let key = NodeKey::new(node.label, &node.name);
        if key.name.is_empty() {
            return Err(GraphError::Document("node with an empty name".into()));
        }
        if !graph.add_node(key.clone(), node.properties) {
            return Err(GraphError::Document(format!("duplicate node {key}")));
        }
    }
    for edge in doc.edges {
        let key = EdgeKey {
            from: NodeKey::new(edge.from.label, &edge.from.name),
            relation: normalize_name(&edge.relation),
            to: NodeKey::new(edge.to.label, &edge.to.name),
        };
        if key.relation.is_empty() {
            return Err(GraphError::Document("edge with an empty relation".into()));
        }
        if graph.edges.contains_key(&key) {
            return Err(GraphError::Document(format!(
                "duplicate edge {} -[{}]-> {}",
                key.from, key.relation, key.to
            )));
        }
        graph.upsert_edge(key, edge.properties).map_err(|e| match e {
            GraphError::UnknownNode(k) => GraphError::Document(format!("edge endpoint {k} is not a node")),
            other => other,
        })?;
    }
    Ok(graph)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn node_ids(graph: &PropertyGraph) -> BTreeMap<&NodeKey, String> {
    graph.nodes.keys().enumerate().map(|(i, k)| (k, format!("n{i}"))).collect()
}

/// Graphviz export: one statement per node (filled by label color) and one
/// per edge (labeled with its relation).
pub fn export_dot(graph: &PropertyGraph) -> String {
    let mut out = String::from("digraph knowledge_graph {\n");
    if graph.node_count() > 0 {
        out.push_str("  rankdir=LR;\n  node [shape=box, style=\"rounded,filled\"];\n");
    }
    let ids = node_ids(graph);
    for key in graph.nodes.keys() {
        writeln!(
            out,
            "  {} [label=\"{}\", fillcolor=\"{}\", tooltip=\"{}\"];",
            ids[key],
            dot_escape(&key.name),
            key.label.color(),
            key.label
        )
        .expect("writing to a String cannot fail");
    }
    for (edge, props) in graph.edges() {
        let mut attrs = format!("label=\"{}\"", dot_escape(&edge.relation));
        if !props.is_empty() {
            let tip: Vec<String> = props.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(attrs, ", tooltip=\"{}\"", dot_escape(&tip.join(" "))).expect("writing to a String cannot fail");
        }
        writeln!(out, "  {} -> {} [{}];", ids[&edge.from], ids[&edge.to], attrs)
            .expect("writing to a String cannot fail");
    }
    out.push_str("}\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// GraphML export with declared keys for node label/name, edge relation and
/// every property name in use.
pub fn export_graphml(graph: &PropertyGraph) -> String {
    let node_props: BTreeSet<&String> = graph.nodes.values().flat_map(|p| p.keys()).collect();
    let edge_props: BTreeSet<&String> = graph.edges.values().flat_map(|p| p.keys()).collect();
    let node_key: BTreeMap<&String, String> =
        node_props.iter().enumerate().map(|(i, k)| (*k, format!("np{i}"))).collect();
    let edge_key: BTreeMap<&String, String> =
        edge_props.iter().enumerate().map(|(i, k)| (*k, format!("ep{i}"))).collect();

    let mut out = String::new();
    let w = &mut out;
    let mut line = |s: String| {
        w.push_str(&s);
        w.push('\n');
    };
    line(r#"<?xml version="1.0" encoding="UTF-8"?>"#.into());
    line(
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">"#
            .into(),
    );
    line(r#"  <key id="label" for="node" attr.name="label" attr.type="string"/>"#.into());
    line(r#"  <key id="name" for="node" attr.name="name" attr.type="string"/>"#.into());
    line(r#"  <key id="relation" for="edge" attr.name="relation" attr.type="string"/>"#.into());
    for (name, id) in &node_key {
        line(format!(
            r#"  <key id="{id}" for="node" attr.name="{}" attr.type="string"/>"#,
            xml_escape(name)
        ));
    }
    for (name, id) in &edge_key {
        line(format!(
            r#"  <key id="{id}" for="edge" attr.name="{}" attr.type="string"/>"#,
            xml_escape(name)
        ));
    }
    line(r#"  <graph id="G" edgedefault="directed">"#.into());
    let ids = node_ids(graph);
    for (key, props) in graph.nodes() {
        line(format!(r#"    <node id="{}">"#, ids[key]));
        line(format!(r#"      <data key="label">{}</data>"#, key.label));
        line(format!(r#"      <data key="name">{}</data>"#, xml_escape(&key.name)));
        for (k, v) in props {
            line(format!(r#"      <data key="{}">{}</data>"#, node_key[k], xml_escape(v)));
        }
        line("    </node>".into());
    }
    for (i, (edge, props)) in graph.edges().enumerate() {
        line(format!(
            r#"    <edge id="e{i}" source="{}" target="{}">"#,
            ids[&edge.from], ids[&edge.to]
        ));
        line(format!(r#"      <data key="relation">{}</data>"#, xml_escape(&edge.relation)));
        for (k, v) in props {
            line(format!(r#"      <data key="{}">{}</data>"#, edge_key[k], xml_escape(v)));
        }
        line("    </edge>".into());
    }
    line("  </graph>".into());
    line("</graphml>".into());
    out
}
