//! Generators, fixtures and brute-force oracles shared by the integration
//! tests. Nothing here calls into the algorithms it is used to check.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use journet::corpus::{
    AffiliationRecord, AuthorRecord, Corpus, PacsCode, PaperId, PaperRecord, ReferenceKey,
};
use journet::graph::{build_graph, Directedness, Graph, GraphBuilder, NodeKind, NodeRef};
use journet::layers::BipartiteGraph;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn a(i: u64) -> NodeRef {
    NodeRef::author(i)
}

pub fn p(id: &str) -> NodeRef {
    NodeRef::paper(id.parse().unwrap())
}

pub fn pid(id: &str) -> PaperId {
    id.parse().unwrap()
}

pub fn paper(id: &str, authors: &[u64], pacs: &[&str], refs: &[(&str, Option<&str>)]) -> PaperRecord {
    let mut rec = PaperRecord::new(pid(id), format!("Paper {id}"));
    rec.author_ids = authors.to_vec();
    rec.pacs_codes = pacs.iter().map(|c| PacsCode::parse(c).unwrap()).collect();
    rec.reference_keys = refs
        .iter()
        .map(|(k, i)| ReferenceKey::new(k, i.map(pid)).unwrap())
        .collect();
    rec.reference_keys.sort();
    rec
}

pub fn author(id: u64) -> AuthorRecord {
    AuthorRecord {
        author_id: id,
        name: format!("Author {id}"),
        affiliation_ids: BTreeSet::new(),
    }
}

/// Undirected graph on author nodes `0..n` with each pair linked with
/// probability `prob` and weight 1..=3.
pub fn random_graph(rng: &mut StdRng, n: u64, prob: f64) -> Graph {
    let mut links = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(prob) {
                links.push((a(u), a(v), rng.gen_range(1..=3)));
            }
        }
    }
    build_graph(Directedness::Undirected, links, (0..n).map(a)).unwrap()
}

/// Random labelled tree on `n` nodes (each node i > 0 attaches to an earlier one).
pub fn random_tree(rng: &mut StdRng, n: u64) -> Graph {
    let links = (1..n).map(|i| (a(rng.gen_range(0..i)), a(i), 1));
    build_graph(Directedness::Undirected, links, (0..n).map(a)).unwrap()
}

/// Random connected graph: a random tree plus extra random edges.
pub fn random_connected(rng: &mut StdRng, n: u64, extra: f64) -> Graph {
    let mut links: Vec<_> = (1..n).map(|i| (a(rng.gen_range(0..i)), a(i), 1)).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra) {
                links.push((a(u), a(v), 1));
            }
        }
    }
    build_graph(Directedness::Undirected, links, (0..n).map(a)).unwrap()
}

pub type Relation = BTreeMap<NodeRef, BTreeSet<NodeRef>>;

/// Random author-paper bipartite graph with up to 20 + 20 nodes and link
/// probability 0.2, plus each side's neighbour sets.
pub fn random_bipartite(r: &mut StdRng) -> (BipartiteGraph, Relation, Relation) {
    let nl = r.gen_range(1..=20u64);
    let nr = r.gen_range(1..=20u32);
    let rights: Vec<NodeRef> = (1..=nr).map(|i| NodeRef::paper(PaperId::new(1, 1, i))).collect();
    let mut b = GraphBuilder::new(Directedness::Undirected);
    let mut left_rel = Relation::new();
    let mut right_rel = Relation::new();
    for l in 0..nl {
        b.add_node(a(l));
        left_rel.entry(a(l)).or_default();
    }
    for rn in &rights {
        b.add_node(rn.clone());
        right_rel.entry(rn.clone()).or_default();
    }
    for l in 0..nl {
        for rn in &rights {
            if r.gen_bool(0.2) {
                b.add_link(a(l), rn.clone(), 1).unwrap();
                left_rel.get_mut(&a(l)).unwrap().insert(rn.clone());
                right_rel.get_mut(rn).unwrap().insert(a(l));
            }
        }
    }
    let bg = BipartiteGraph::new(b.build(), NodeKind::Author, NodeKind::Paper).unwrap();
    (bg, left_rel, right_rel)
}

const PACS_POOL: [&str; 6] = ["05.50.+q", "64.60.Ak", "75.10.Jm", "71.27.+a", "05.70.Jk", "61.20.-p"];

/// Random valid corpus of up to `max_papers` papers over volumes and
/// issues 1..=3, authors 1..=15, with external and internal references.
pub fn random_corpus(rng: &mut StdRng, max_papers: usize) -> Corpus {
    let n = rng.gen_range(1..=max_papers);
    let mut ids = BTreeSet::new();
    while ids.len() < n {
        ids.insert(PaperId::new(rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=9)));
    }
    let ids: Vec<PaperId> = ids.into_iter().collect();
    let author_pool: Vec<u64> = (1..=15).collect();
    let mut papers = Vec::new();
    for &id in &ids {
        let mut rec = PaperRecord::new(id, format!("Title of {id}"));
        let k = rng.gen_range(1..=4);
        rec.author_ids = author_pool.choose_multiple(rng, k).copied().collect();
        for _ in 0..rng.gen_range(0..=3) {
            rec.pacs_codes.insert(PacsCode::parse(PACS_POOL.choose(rng).unwrap()).unwrap());
        }
        let mut keys = BTreeMap::new();
        for _ in 0..rng.gen_range(0..=5) {
            let key = format!("Ext Work {}", rng.gen_range(0..10));
            keys.insert(key.to_lowercase(), ReferenceKey::external(&key).unwrap());
        }
        for _ in 0..rng.gen_range(0..=2) {
            let target = *ids.choose(rng).unwrap();
            if target != id {
                let key = format!("journal {target}");
                keys.insert(key.clone(), ReferenceKey::new(&key, Some(target)).unwrap());
            }
        }
        rec.reference_keys = keys.into_values().collect();
        papers.push(rec);
    }
    let used: BTreeSet<u64> = papers.iter().flat_map(|p| p.author_ids.clone()).collect();
    let authors: Vec<AuthorRecord> = used
        .iter()
        .map(|&i| AuthorRecord {
            author_id: i,
            name: format!("Author {i}"),
            affiliation_ids: [(i % 3) + 1].into(),
        })
        .collect();
    let affiliations = (1..=3).map(|i| AffiliationRecord {
        affiliation_id: i,
        name: format!("Institute {i}"),
        country: (i != 2).then(|| "Ukraine".to_string()),
    });
    Corpus::from_records(papers, authors, affiliations).expect("generator yields valid corpora")
}

/// Author 3672 co-authors one paper with 3671, 3673 and 3674; author 100
/// has three papers with other co-authors.
pub fn coauthor_fixture() -> Corpus {
    Corpus::from_records(
        [
            paper("v3n1p5", &[3671, 3672, 3673, 3674], &[], &[]),
            paper("v4n1p1", &[100, 4368], &[], &[]),
            paper("v4n2p3", &[100, 4385], &[], &[]),
            paper("v5n1p2", &[10446, 100], &[], &[]),
        ],
        [3671, 3672, 3673, 3674, 100, 4368, 4385, 10446].map(author),
        [],
    )
    .unwrap()
}

/// v4n2p17 shares author 7, PACS 05.50.+q and a citation with v4n4p14.
/// Decoys each match v4n4p14 in exactly one or two relations.
pub fn overlap_corpus() -> Corpus {
    Corpus::from_records(
        [
            paper("v4n4p14", &[7, 8], &["05.50.+q", "75.10.Jm"], &[("Journal v4n2p17", Some("v4n2p17")), ("Ext A", None)]),
            paper("v4n2p17", &[7], &["05.50.+q"], &[("Ext B", None)]),
            // shares an author and a code, no citation
            paper("v4n1p3", &[8], &["75.10.Jm"], &[]),
            // cites v4n4p14 only
            paper("v5n1p1", &[9], &["64.60.Ak"], &[("Journal v4n4p14", Some("v4n4p14"))]),
            // shares a code only
            paper("v3n2p2", &[10], &["75.10.Jm"], &[]),
        ],
        [7, 8, 9, 10].map(author),
        [],
    )
    .unwrap()
}

/// Writes the corpus as the five CSV input files under `dir`.
pub fn write_csv_files(corpus: &Corpus, dir: &Path) -> [PathBuf; 5] {
    let paths = ["papers.csv", "authors.csv", "authorship.csv", "references.csv", "affiliations.csv"]
        .map(|f| dir.join(f));
    let mut w = csv::Writer::from_path(&paths[0]).unwrap();
    w.write_record(["paper_id", "title", "volume", "issue", "year", "pacs"]).unwrap();
    for p in corpus.papers.values() {
        let pacs: Vec<&str> = p.pacs_codes.iter().map(|c| c.as_str()).collect();
        w.write_record([
            p.paper_id.to_string(),
            p.title.clone(),
            p.volume.to_string(),
            p.issue.to_string(),
            p.year.map(|y| y.to_string()).unwrap_or_default(),
            pacs.join(";"),
        ])
        .unwrap();
    }
    w.flush().unwrap();
    let mut w = csv::Writer::from_path(&paths[1]).unwrap();
    w.write_record(["author_id", "name", "affiliation_ids"]).unwrap();
    for a in corpus.authors.values() {
        let affs: Vec<String> = a.affiliation_ids.iter().map(ToString::to_string).collect();
        w.write_record([a.author_id.to_string(), a.name.clone(), affs.join(";")]).unwrap();
    }
    w.flush().unwrap();
    let mut w = csv::Writer::from_path(&paths[2]).unwrap();
    w.write_record(["paper_id", "author_id", "position"]).unwrap();
    for p in corpus.papers.values() {
        for (i, a) in p.author_ids.iter().enumerate() {
            w.write_record([p.paper_id.to_string(), a.to_string(), (i + 1).to_string()]).unwrap();
        }
    }
    w.flush().unwrap();
    let mut w = csv::Writer::from_path(&paths[3]).unwrap();
    w.write_record(["citing_paper_id", "ref_key", "internal_paper_id"]).unwrap();
    for p in corpus.papers.values() {
        for r in &p.reference_keys {
            w.write_record([
                p.paper_id.to_string(),
                r.key.clone(),
                r.internal_paper_id.map(|i| i.to_string()).unwrap_or_default(),
            ])
            .unwrap();
        }
    }
    w.flush().unwrap();
    let mut w = csv::Writer::from_path(&paths[4]).unwrap();
    w.write_record(["affiliation_id", "name", "country"]).unwrap();
    for f in corpus.affiliations.values() {
        w.write_record([f.affiliation_id.to_string(), f.name.clone(), f.country.clone().unwrap_or_default()])
            .unwrap();
    }
    w.flush().unwrap();
    paths
}

// ---------------------------------------------------------------- oracles

/// Dense symmetric 0/1 adjacency of the undirected view.
pub fn dense_adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut m = vec![vec![false; n]; n];
    for (u, v, _) in g.links() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

/// All-pairs hop distances, `None` for unreachable pairs.
pub fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<Option<usize>>> {
    let n = adj.len();
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if adj[i][j] {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| x + y < c) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

/// Clustering per node as an exact fraction (2T, k(k-1)); (0, 1) when k < 2.
pub fn clustering_fractions(adj: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = adj.len();
    (0..n)
        .map(|v| {
            let nb: Vec<usize> = (0..n).filter(|&u| adj[v][u]).collect();
            let k = nb.len();
            if k < 2 {
                return (0, 1);
            }
            let mut t = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if adj[nb[i]][nb[j]] {
                        t += 1;
                    }
                }
            }
            (2 * t, k * (k - 1))
        })
        .collect()
}

/// Edge betweenness by explicit enumeration of every shortest path of
/// every unordered pair.
pub fn betweenness_by_enumeration(adj: &[Vec<bool>]) -> BTreeMap<(usize, usize), f64> {
    let n = adj.len();
    let d = floyd_warshall(adj);
    let mut out: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if adj[i][j] {
                out.insert((i, j), 0.0);
            }
        }
    }
    for s in 0..n {
        for t in s + 1..n {
            let Some(len) = d[s][t] else { continue };
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                let step = path.len();
                for next in 0..n {
                    if adj[last][next] && d[s][next] == Some(step) && d[next][t] == Some(len - step) {
                        let mut p = path.clone();
                        p.push(next);
                        stack.push(p);
                    }
                }
            }
            let share = 1.0 / paths.len() as f64;
            for path in &paths {
                for w in path.windows(2) {
                    *out.get_mut(&(w[0].min(w[1]), w[0].max(w[1]))).unwrap() += share;
                }
            }
        }
    }
    out
}

/// Every set partition of `0..n` as a label vector (restricted growth strings).
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max + 1 {
            if i == 0 && l > 0 {
                break;
            }
            cur.push(l);
            rec(i + 1, n, cur, if i == 0 { 0 } else { max.max(l) }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        rec(0, n, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// Exact modularity as (numerator, denominator) from the textbook formula.
pub fn modularity_exact(adj: &[Vec<bool>], labels: &[usize]) -> (i64, i64) {
    let n = adj.len();
    let m: i64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| adj[i][j]).count() as i64;
    let communities: BTreeSet<usize> = labels.iter().copied().collect();
    // Q = sum_c [ L_c / m - (d_c / 2m)^2 ] = sum_c (4 m L_c - d_c^2) / (4 m^2)
    let mut num = 0;
    for c in communities {
        let members: Vec<usize> = (0..n).filter(|&v| labels[v] == c).collect();
        let mut inside = 0i64;
        let mut degree = 0i64;
        for &u in &members {
            degree += (0..n).filter(|&v| adj[u][v]).count() as i64;
            for &v in &members {
                if u < v && adj[u][v] {
                    inside += 1;
                }
            }
        }
        num += 4 * m * inside - degree * degree;
    }
    let den = 4 * m * m;
    let g = gcd(num.abs(), den);
    (num / g, den / g)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.max(1) } else { gcd(b, a % b) }
}

/// Common-counterpart counts between every pair of `side` nodes of a
/// bipartite relation given as node -> counterpart sets.
pub fn pairwise_common(relation: &BTreeMap<NodeRef, BTreeSet<NodeRef>>) -> BTreeMap<(NodeRef, NodeRef), u64> {
    let keys: Vec<&NodeRef> = relation.keys().collect();
    let mut out = BTreeMap::new();
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            let c = relation[keys[i]].intersection(&relation[keys[j]]).count() as u64;
            if c > 0 {
                out.insert((keys[i].clone(), keys[j].clone()), c);
            }
        }
    }
    out
}

pub fn link_map(g: &Graph) -> BTreeMap<(NodeRef, NodeRef), u64> {
    g.link_triples().into_iter().map(|(u, v, w)| ((u, v), w)).collect()
}
