//! Randomized and exhaustive verification suites.
//!
//! Each suite checks one construction or engine against an independent
//! ground truth (d-separation signatures, exhaustive enumeration, or exact
//! weights). A failing check records a human-readable message and, where a
//! graph is involved, writes a replayable artifact file with the offending
//! graph and its seeds.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use mecsize_core::dsep::is_d_connected_oracle_with_cap;
use mecsize_core::{
    certificate, cycle_packing, dsep_signature, enumerate_graphs, find_s_structures,
    flip_matching_subset, layer2_matching, reverse_cycle, reversible_edges, sample_dnp_rejection,
    sample_uniform_admg, sample_uniform_dcg, skeleton, toggle_underdetermined_edge,
    tower_decomposition, tower_graph, tower_vector_weight, v_structures, DsepEngine, DsepQuery,
    DsepSignature, GraphKind, MixedGraph, RngSeed, TowerSampler, VertexId, VertexSet,
};
use rand::Rng;

use super::{graph_key, tv_distance};
use crate::format::write_graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Reversible,
    Flips,
    AdmgToggle,
    DcgReverse,
    DsepOracle,
    Sampler,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "reversible" => Some(Suite::Reversible),
            "flips" => Some(Suite::Flips),
            "admg-toggle" => Some(Suite::AdmgToggle),
            "dcg-reverse" => Some(Suite::DcgReverse),
            "dsep-oracle" => Some(Suite::DsepOracle),
            "sampler" => Some(Suite::Sampler),
            "all" => Some(Suite::All),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Reversible => "reversible",
            Suite::Flips => "flips",
            Suite::AdmgToggle => "admg-toggle",
            Suite::DcgReverse => "dcg-reverse",
            Suite::DsepOracle => "dsep-oracle",
            Suite::Sampler => "sampler",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "suite {}: PASS ({} checks)", self.name, self.checks)
        } else {
            write!(
                f,
                "suite {}: FAIL ({} checks, {} failures)",
                self.name,
                self.checks,
                self.failures.len()
            )
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub outcomes: Vec<SuiteOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed())
    }
}

/// Collects failures and writes replay artifacts.
struct Recorder {
    name: &'static str,
    master: RngSeed,
    checks: u64,
    failures: Vec<String>,
    failures_dir: Option<PathBuf>,
}

impl Recorder {
    fn new(name: &'static str, master: RngSeed, failures_dir: Option<&Path>) -> Self {
        Recorder {
            name,
            master,
            checks: 0,
            failures: Vec::new(),
            failures_dir: failures_dir.map(Path::to_path_buf),
        }
    }

    fn check(&mut self, ok: bool, graph: Option<&MixedGraph>, detail: impl Fn() -> String) {
        self.checks += 1;
        if ok {
            return;
        }
        let detail = detail();
        let msg = format!("[{}] {}", self.name, detail);
        if let (Some(dir), Some(g)) = (&self.failures_dir, graph) {
            let _ = std::fs::create_dir_all(dir);
            let path = dir.join(format!("{}_{:04}.graph", self.name, self.failures.len()));
            let mut text = write_graph(g);
            text.push_str(&format!("# suite={} master_seed={}\n", self.name, self.master.master()));
            text.push_str(&format!("# detail: {}\n", detail.replace('\n', " ")));
            let _ = std::fs::write(&path, text);
        }
        self.failures.push(msg);
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

/// Runs one suite (or all of them) and returns the per-suite outcomes.
pub fn run_suite(
    suite: Suite,
    trials: u64,
    seed: RngSeed,
    failures_dir: Option<&Path>,
) -> anyhow::Result<VerifyReport> {
    let list: Vec<Suite> = match suite {
        Suite::All => vec![
            Suite::Reversible,
            Suite::Flips,
            Suite::AdmgToggle,
            Suite::DcgReverse,
            Suite::DsepOracle,
            Suite::Sampler,
        ],
        s => vec![s],
    };
    let mut outcomes = Vec::new();
    for s in list {
        let outcome = match s {
            Suite::Reversible => suite_reversible(seed, failures_dir)?,
            Suite::Flips => suite_flips(trials, seed, failures_dir)?,
            Suite::AdmgToggle => suite_admg_toggle(trials, seed, failures_dir)?,
            Suite::DcgReverse => suite_dcg_reverse(trials, seed, failures_dir)?,
            Suite::DsepOracle => suite_dsep_oracle(trials, seed, failures_dir)?,
            Suite::Sampler => suite_sampler(seed, failures_dir)?,
            Suite::All => unreachable!(),
        };
        outcomes.push(outcome);
    }
    Ok(VerifyReport { outcomes })
}

/// Exhaustive reversibility check: on every DAG with up to four vertices, an
/// edge satisfies the parent-set criterion exactly when its reversal is
/// acyclic and signature-preserving.
fn suite_reversible(seed: RngSeed, failures_dir: Option<&Path>) -> anyhow::Result<SuiteOutcome> {
    let mut rec = Recorder::new("reversible", seed, failures_dir);
    for n in 2..=4u32 {
        for g in enumerate_graphs(n, GraphKind::Dag)? {
            let sig = dsep_signature(&g)?;
            let fast = reversible_edges(&g).expect("enumerated DAGs are DAGs");
            for &(v, w) in g.directed_edges() {
                let flipped: Vec<(u32, u32)> = g
                    .directed_edges()
                    .iter()
                    .map(|&(a, b)| {
                        if (a, b) == (v, w) {
                            (b.index(), a.index())
                        } else {
                            (a.index(), b.index())
                        }
                    })
                    .collect();
                let brute = match MixedGraph::new(n, &flipped, &[], GraphKind::Dag) {
                    Ok(h) => dsep_signature(&h)? == sig,
                    Err(_) => false,
                };
                rec.check(fast.contains(&(v, w)) == brute, Some(&g), || {
                    format!("criterion vs signature mismatch on edge ({v},{w})")
                });
            }
        }
    }
    Ok(rec.finish())
}

/// Randomized matching-flip check on sparse DAGs, plus exhaustive (n <= 4)
/// and sampled (n = 5) validation that the matching bound never exceeds the
/// true class size.
fn suite_flips(
    trials: u64,
    seed: RngSeed,
    failures_dir: Option<&Path>,
) -> anyhow::Result<SuiteOutcome> {
    let mut rec = Recorder::new("flips", seed, failures_dir);
    for trial in 0..trials {
        let trial_seed = seed.stream(trial);
        let mut rng = trial_seed.rng();
        let n: u32 = rng.gen_range(6..=14);
        let g = TowerSampler::new(n, 0.15)?.sample(trial_seed.stream(1));
        let matching = layer2_matching(&g).expect("sampled DAGs are DAGs");
        rec.check(
            matching.len() >= matching.unique_set().len() as usize,
            Some(&g),
            || format!("trial {trial}: greedy matching smaller than the unshared-parent set"),
        );
        let s = matching.len().min(6) as u32;

        let variants: Vec<MixedGraph> = (0u64..1 << s)
            .map(|mask| flip_matching_subset(&g, &matching, mask))
            .collect::<Result<_, _>>()
            .expect("the computed matching is valid for its own graph");
        let distinct: BTreeSet<&MixedGraph> = variants.iter().collect();
        rec.check(distinct.len() == variants.len(), Some(&g), || {
            format!("trial {trial}: flip variants are not pairwise distinct")
        });

        let base_key = (skeleton(&variants[0]), v_structures(&variants[0]));
        for (i, h) in variants.iter().enumerate() {
            rec.check(
                (skeleton(h), v_structures(h)) == base_key,
                Some(&g),
                || format!("trial {trial}: variant {i} fails the fast equivalence test"),
            );
        }
        if n <= 10 {
            let base_sig = dsep_signature(&variants[0])?;
            for (i, h) in variants.iter().enumerate().skip(1) {
                rec.check(dsep_signature(h)? == base_sig, Some(&g), || {
                    format!("trial {trial}: variant {i} changes the d-separation signature")
                });
            }
        }
    }

    // Certificate never exceeds ground truth: exhaustively for n <= 4.
    for n in 2..=4u32 {
        let classes = dag_class_sizes(n)?;
        for g in enumerate_graphs(n, GraphKind::Dag)? {
            let bound = certificate(&g).log2_bound;
            let size = classes[&dsep_signature(&g)?];
            rec.check(1u64 << bound <= size, Some(&g), || {
                format!("matching bound 2^{bound} exceeds class size {size} at n={n}")
            });
        }
    }
    // And on sampled five-vertex DAGs against the full n = 5 grouping.
    let classes5 = dag_class_sizes(5)?;
    for trial in 0..100 {
        let g = TowerSampler::new(5, 0.4)?.sample(seed.stream(10_000 + trial));
        let bound = certificate(&g).log2_bound;
        let size = classes5[&dsep_signature(&g)?];
        rec.check(1u64 << bound <= size, Some(&g), || {
            format!("matching bound 2^{bound} exceeds class size {size} at n=5")
        });
    }
    Ok(rec.finish())
}

fn dag_class_sizes(n: u32) -> anyhow::Result<BTreeMap<DsepSignature, u64>> {
    let mut sizes = BTreeMap::new();
    for g in enumerate_graphs(n, GraphKind::Dag)? {
        *sizes.entry(dsep_signature(&g)?).or_insert(0u64) += 1;
    }
    Ok(sizes)
}

/// Randomized shortcut-toggle check on uniform ADMGs, plus the exhaustive
/// small-n certificate-versus-class-size comparison.
fn suite_admg_toggle(
    trials: u64,
    seed: RngSeed,
    failures_dir: Option<&Path>,
) -> anyhow::Result<SuiteOutcome> {
    let mut rec = Recorder::new("admg-toggle", seed, failures_dir);
    for trial in 0..trials {
        let trial_seed = seed.stream(trial);
        let mut rng = trial_seed.rng();
        let n: u32 = rng.gen_range(3..=5);
        // Resample until the graph carries at least one gadget.
        let mut found = None;
        for attempt in 0..500u64 {
            let g = sample_uniform_admg(n, trial_seed.stream(1 + attempt));
            let s = find_s_structures(&g).expect("uniform ADMGs are ADMGs");
            if s.m() > 0 {
                found = Some((g, s));
                break;
            }
        }
        let Some((g, structures)) = found else {
            rec.check(false, None, || {
                format!("trial {trial}: no gadget-carrying ADMG found in 500 attempts")
            });
            continue;
        };
        let sig = dsep_signature(&g)?;
        for t in structures.triples() {
            let toggled = toggle_underdetermined_edge(&g, t)
                .expect("detected triples carry the gadget edges");
            rec.check(dsep_signature(&toggled)? == sig, Some(&g), || {
                format!(
                    "trial {trial}: toggling ({},{},{}) changes the signature",
                    t.v1, t.v2, t.v3
                )
            });
            let back = toggle_underdetermined_edge(&toggled, t)
                .expect("the gadget survives a shortcut toggle");
            rec.check(back == g, Some(&g), || {
                format!("trial {trial}: double toggle is not the identity")
            });
        }
        let floor = (structures.m() as u64).div_ceil(3 * n as u64);
        rec.check(structures.selection_len() as u64 >= floor, Some(&g), || {
            format!(
                "trial {trial}: greedy selection {} below ceil(m/3n) = {floor}",
                structures.selection_len()
            )
        });
    }

    // Exhaustive n <= 4: 2^bound <= true class size, and the greedy disjoint
    // selection achieves the counting bound ceil(m / 3n).
    for n in 2..=4u32 {
        let mut classes: BTreeMap<DsepSignature, u64> = BTreeMap::new();
        for g in enumerate_graphs(n, GraphKind::Admg)? {
            *classes.entry(dsep_signature(&g)?).or_insert(0) += 1;
        }
        for g in enumerate_graphs(n, GraphKind::Admg)? {
            let structures = find_s_structures(&g).expect("enumerated ADMGs are ADMGs");
            let bound = certificate(&g).log2_bound;
            let size = classes[&dsep_signature(&g)?];
            rec.check(1u64 << bound <= size, Some(&g), || {
                format!("gadget bound 2^{bound} exceeds class size {size} at n={n}")
            });
            let m = structures.m() as u64;
            if m > 0 {
                let floor = m.div_ceil(3 * n as u64);
                rec.check(structures.selection_len() as u64 >= floor, Some(&g), || {
                    format!(
                        "greedy selection {} below ceil(m/3n) = {floor} at n={n}",
                        structures.selection_len()
                    )
                });
            }
        }
    }
    Ok(rec.finish())
}

/// Randomized cycle-reversal check on uniform DCGs, plus certificate bounds
/// against exhaustive class sizes (n <= 4 fully, n = 5 by sampling against
/// the full grouping).
fn suite_dcg_reverse(
    trials: u64,
    seed: RngSeed,
    failures_dir: Option<&Path>,
) -> anyhow::Result<SuiteOutcome> {
    let mut rec = Recorder::new("dcg-reverse", seed, failures_dir);
    for trial in 0..trials {
        let trial_seed = seed.stream(trial);
        let mut rng = trial_seed.rng();
        let n: u32 = rng.gen_range(3..=6);
        let mut found = None;
        for attempt in 0..500u64 {
            let g = sample_uniform_dcg(n, trial_seed.stream(1 + attempt));
            let packing = cycle_packing(&g).expect("uniform DCGs are DCGs");
            if packing.k() > 0 {
                found = Some((g, packing));
                break;
            }
        }
        let Some((g, packing)) = found else {
            rec.check(false, None, || {
                format!("trial {trial}: no cyclic DCG found in 500 attempts")
            });
            continue;
        };
        let sig = dsep_signature(&g)?;
        for c in packing.cycles() {
            let h = reverse_cycle(&g, c).expect("packing cycles are cycles of g");
            rec.check(
                h.directed_edges().len() == g.directed_edges().len(),
                Some(&g),
                || format!("trial {trial}: cycle reversal merged edges"),
            );
            rec.check(dsep_signature(&h)? == sig, Some(&g), || {
                format!("trial {trial}: cycle reversal changes the signature")
            });
            let desc_ok = g.vertices().all(|v| g.descendants(v) == h.descendants(v));
            rec.check(desc_ok, Some(&g), || {
                format!("trial {trial}: cycle reversal changes a descendant set")
            });
            let mut back = vec![c[0]];
            back.extend(c[1..].iter().rev());
            rec.check(reverse_cycle(&h, &back).expect("reversed cycle is a cycle of h") == g,
                Some(&g),
                || format!("trial {trial}: double reversal does not restore the graph"),
            );
        }
    }

    // Certificates against true class sizes.
    for n in 2..=4u32 {
        let mut classes: BTreeMap<DsepSignature, u64> = BTreeMap::new();
        for g in enumerate_graphs(n, GraphKind::Dcg)? {
            *classes.entry(dsep_signature(&g)?).or_insert(0) += 1;
        }
        for g in enumerate_graphs(n, GraphKind::Dcg)? {
            let bound = certificate(&g).log2_bound;
            let size = classes[&dsep_signature(&g)?];
            rec.check(1u64 << bound <= size, Some(&g), || {
                format!("packing bound 2^{bound} exceeds class size {size} at n={n}")
            });
        }
    }
    // n = 5: group the full space once, then check sampled graphs.
    let mut classes5: HashMap<DsepSignature, u64> = HashMap::new();
    for g in enumerate_graphs(5, GraphKind::Dcg)? {
        *classes5.entry(dsep_signature(&g)?).or_insert(0) += 1;
    }
    for trial in 0..200u64 {
        let g = sample_uniform_dcg(5, seed.stream(20_000 + trial));
        let bound = certificate(&g).log2_bound;
        let size = classes5[&dsep_signature(&g)?];
        rec.check(1u64 << bound <= size, Some(&g), || {
            format!("packing bound 2^{bound} exceeds class size {size} at n=5")
        });
    }
    Ok(rec.finish())
}

/// For random graphs of every kind, the state-BFS reachability and the
/// exhaustive walk enumerator must answer every query identically.
fn suite_dsep_oracle(
    trials: u64,
    seed: RngSeed,
    failures_dir: Option<&Path>,
) -> anyhow::Result<SuiteOutcome> {
    let mut rec = Recorder::new("dsep-oracle", seed, failures_dir);
    for (kind_idx, kind) in [GraphKind::Dag, GraphKind::Admg, GraphKind::Dcg]
        .into_iter()
        .enumerate()
    {
        for trial in 0..trials {
            let trial_seed = seed.stream((kind_idx as u64) << 32 | trial);
            let mut rng = trial_seed.rng();
            let n: u32 = rng.gen_range(2..=5);
            let g = match kind {
                GraphKind::Dag => {
                    let p = [0.2, 0.35, 0.5][rng.gen_range(0..3)];
                    TowerSampler::new(n, p)?.sample(trial_seed.stream(1))
                }
                GraphKind::Admg => sample_uniform_admg(n, trial_seed.stream(1)),
                GraphKind::Dcg => sample_uniform_dcg(n, trial_seed.stream(1)),
            };
            let mut engine = DsepEngine::new(&g);
            for x in 1..n {
                for y in (x + 1)..=n {
                    let (x, y) = (VertexId::new(x), VertexId::new(y));
                    for zmask in 0u32..(1 << n) {
                        let mut z = VertexSet::empty(n);
                        for v in 1..=n {
                            if v != x.index() && v != y.index() && zmask >> (v - 1) & 1 == 1 {
                                z.insert(VertexId::new(v));
                            }
                        }
                        if z.len() != zmask.count_ones() {
                            continue; // mask touched x or y; skip the duplicate
                        }
                        let q = DsepQuery::new(x, y, z).expect("constructed query is valid");
                        let fast = engine.is_d_connected(&q)?;
                        let slow = is_d_connected_oracle_with_cap(&g, &q, 8)?;
                        rec.check(fast == slow, Some(&g), || {
                            format!("{kind} trial {trial}: engines disagree on {q}")
                        });
                    }
                }
            }
        }
    }
    Ok(rec.finish())
}

/// Sampler exactness: million-draw TV distances against exact weights,
/// tower-vector mass proportionality, and the conditional-independence
/// structure of edges between non-adjacent layers.
fn suite_sampler(seed: RngSeed, failures_dir: Option<&Path>) -> anyhow::Result<SuiteOutcome> {
    let mut rec = Recorder::new("sampler", seed, failures_dir);
    const DRAWS: u64 = 1_000_000;

    for (case, &(n, p)) in [(3u32, 0.2f64), (4, 0.3), (4, 0.5)].iter().enumerate() {
        let exact = exact_dnp_distribution(n, p)?;
        let sampler = TowerSampler::new(n, p)?;
        let case_seed = seed.stream(case as u64);
        let mut tower_counts: HashMap<(u64, u64), u64> = HashMap::new();
        for t in 0..DRAWS {
            *tower_counts
                .entry(graph_key(&sampler.sample(case_seed.stream(t))))
                .or_insert(0) += 1;
        }
        let tv_tower = tv_distance(&exact, &tower_counts, DRAWS);
        rec.check(tv_tower <= 0.02, None, || {
            format!("tower sampler TV {tv_tower:.5} > 0.02 at (n={n}, p={p})")
        });

        let mut rej_counts: HashMap<(u64, u64), u64> = HashMap::new();
        for t in 0..DRAWS {
            let g = sample_dnp_rejection(n, p, case_seed.stream(DRAWS + t))
                .expect("rejection at these sizes succeeds");
            *rej_counts.entry(graph_key(&g)).or_insert(0) += 1;
        }
        // TV between the two empirical distributions.
        let keys: BTreeSet<(u64, u64)> = tower_counts.keys().chain(rej_counts.keys()).copied().collect();
        let tv_pair: f64 = keys
            .iter()
            .map(|k| {
                let a = *tower_counts.get(k).unwrap_or(&0) as f64 / DRAWS as f64;
                let b = *rej_counts.get(k).unwrap_or(&0) as f64 / DRAWS as f64;
                (a - b).abs()
            })
            .sum::<f64>()
            / 2.0;
        rec.check(tv_pair <= 0.03, None, || {
            format!("tower vs rejection TV {tv_pair:.5} > 0.03 at (n={n}, p={p})")
        });
    }

    // Uniform ADMG sampling: a million draws at n = 3 against the uniform
    // distribution over all 200 ADMGs.
    {
        let admg_seed = seed.stream(101);
        let mut exact: HashMap<(u64, u64), f64> = HashMap::new();
        for g in enumerate_graphs(3, GraphKind::Admg)? {
            exact.insert(graph_key(&g), 1.0 / 200.0);
        }
        let mut counts: HashMap<(u64, u64), u64> = HashMap::new();
        for t in 0..DRAWS {
            *counts
                .entry(graph_key(&sample_uniform_admg(3, admg_seed.stream(t))))
                .or_insert(0) += 1;
        }
        let tv = tv_distance(&exact, &counts, DRAWS);
        rec.check(tv <= 0.02, None, || {
            format!("uniform ADMG sampler TV {tv:.5} > 0.02 at n=3")
        });
    }

    // Uniform DCG sampling at n = 3: TV against the uniform distribution over
    // all 64 directed graphs, and the probability that the triple carries a
    // directed 3-cycle. Exhaustive enumeration puts the latter at exactly
    // 15/64 (two orientations of 8 patterns each, overlapping in the
    // all-six-edges graph), and the empirical frequency must match it.
    {
        let dcg_seed = seed.stream(102);
        let mut exact: HashMap<(u64, u64), f64> = HashMap::new();
        let mut cyclic3 = 0u64;
        let mut total = 0u64;
        for g in enumerate_graphs(3, GraphKind::Dcg)? {
            exact.insert(graph_key(&g), 1.0 / 64.0);
            total += 1;
            if cycle_packing(&g).expect("enumerated DCGs are DCGs").k() > 0 {
                cyclic3 += 1;
            }
        }
        rec.check(total == 64 && cyclic3 == 15, None, || {
            format!("expected 15/64 three-cycle-carrying DCGs, enumerated {cyclic3}/{total}")
        });
        let p_cycle = cyclic3 as f64 / total as f64;
        let mut counts: HashMap<(u64, u64), u64> = HashMap::new();
        let mut with_cycle = 0u64;
        for t in 0..DRAWS {
            let g = sample_uniform_dcg(3, dcg_seed.stream(t));
            *counts.entry(graph_key(&g)).or_insert(0) += 1;
            if cycle_packing(&g).expect("uniform DCGs are DCGs").k() > 0 {
                with_cycle += 1;
            }
        }
        let tv = tv_distance(&exact, &counts, DRAWS);
        rec.check(tv <= 0.02, None, || {
            format!("uniform DCG sampler TV {tv:.5} > 0.02 at n=3")
        });
        let freq = with_cycle as f64 / DRAWS as f64;
        let band = 3.0 * (p_cycle * (1.0 - p_cycle) / DRAWS as f64).sqrt();
        rec.check((freq - p_cycle).abs() <= band, None, || {
            format!("3-cycle frequency {freq:.5} outside {p_cycle:.5} +/- {band:.5}")
        });
    }

    // Tower-vector masses from exhaustive enumeration are proportional to the
    // closed-form weights, to relative error 1e-9.
    for &p in &[0.3f64, 0.5] {
        let ratio = p / (1.0 - p);
        let mut mass: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for g in enumerate_graphs(4, GraphKind::Dag)? {
            let h = tower_decomposition(&g).expect("DAGs decompose").vector().to_vec();
            *mass.entry(h).or_insert(0.0) += ratio.powi(g.directed_edges().len() as i32);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (h, m) in &mass {
            let c = m.ln() - tower_vector_weight(h, 4, p)?.ln();
            lo = lo.min(c);
            hi = hi.max(c);
        }
        rec.check(hi - lo <= 1e-9, None, || {
            format!("tower-vector mass constant drifts by {:.3e} at p={p}", hi - lo)
        });
    }

    // Conditional on the tower, edges between non-adjacent layers of a
    // uniform DAG are independent Bernoulli(1/2). Checked two ways: literally
    // against a fixed tower graph at n = 6 (at n = 8 every single tower has
    // probability ~3e-6, too rare to condition on by rejection), and at n = 8
    // against a fixed tower vector with a layer-relative edge position, which
    // is an exactly fair coin by the same conditioning plus label symmetry.
    let fixed_sigma = fixed_tower_graph_check(seed.stream(777))?;
    rec.check(fixed_sigma.is_none(), None, || {
        fixed_sigma.clone().unwrap_or_default()
    });
    let fixed_vector = fixed_tower_vector_check(seed.stream(778))?;
    rec.check(fixed_vector.is_none(), None, || {
        fixed_vector.clone().unwrap_or_default()
    });

    Ok(rec.finish())
}

/// Exact `D(n, p)` as normalized weights keyed by graph identity.
fn exact_dnp_distribution(n: u32, p: f64) -> anyhow::Result<HashMap<(u64, u64), f64>> {
    let ratio = p / (1.0 - p);
    let mut weights: HashMap<(u64, u64), f64> = HashMap::new();
    for g in enumerate_graphs(n, GraphKind::Dag)? {
        weights.insert(graph_key(&g), ratio.powi(g.directed_edges().len() as i32));
    }
    let z: f64 = weights.values().sum();
    for w in weights.values_mut() {
        *w /= z;
    }
    Ok(weights)
}

/// Fair-coin test outcome for `with / total` at three sigma.
fn coin_band(with: u64, total: u64, what: &str) -> Option<String> {
    let f = with as f64 / total as f64;
    let band = 3.0 * (0.25 / total as f64).sqrt();
    if (f - 0.5).abs() > band {
        Some(format!("{what}: frequency {f:.4} outside 0.5 +/- {band:.4} ({total} draws)"))
    } else {
        None
    }
}

/// Literal conditioning on one fixed tower graph at n = 6: pick the most
/// frequent tower with three or more layers, then check that one fixed
/// non-adjacent-layer edge position behaves as a fair coin among fresh draws
/// with exactly that tower. Returns `Some(message)` on failure.
fn fixed_tower_graph_check(seed: RngSeed) -> anyhow::Result<Option<String>> {
    const N: u32 = 6;
    const PICK_DRAWS: u64 = 150_000;
    const TEST_DRAWS: u64 = 2_500_000;
    const MIN_KEPT: u64 = 250;
    let sampler = TowerSampler::new(N, 0.5)?;

    let mut freq: HashMap<String, u32> = HashMap::new();
    for t in 0..PICK_DRAWS {
        let g = sampler.sample(seed.stream(t));
        let sigma = tower_graph(&g).expect("sampled DAGs decompose");
        if tower_decomposition(&sigma).expect("towers are acyclic").layer_count() >= 3 {
            *freq.entry(write_graph(&sigma)).or_insert(0) += 1;
        }
    }
    let Some((text, _)) = freq
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
    else {
        return Ok(Some("no three-layer tower observed".to_string()));
    };
    let sigma = crate::format::parse_graph(text).expect("round-trip of emitted graph");
    let layers = tower_decomposition(&sigma).expect("towers are acyclic");
    let u = layers.layers()[0].first().expect("layers are nonempty");
    let w = layers.layers()[2].first().expect("layers are nonempty");

    let mut kept = 0u64;
    let mut with_edge = 0u64;
    for t in 0..TEST_DRAWS {
        let g = sampler.sample(seed.stream(PICK_DRAWS + t));
        if tower_graph(&g).expect("sampled DAGs decompose") != sigma {
            continue;
        }
        kept += 1;
        if g.has_directed(u, w) {
            with_edge += 1;
        }
        if kept >= 5_000 {
            break;
        }
    }
    if kept < MIN_KEPT {
        return Ok(Some(format!(
            "tower-graph conditioning kept only {kept} draws; cannot resolve a 3-sigma band"
        )));
    }
    Ok(coin_band(with_edge, kept, "edge between non-adjacent layers given the tower graph"))
}

/// Same structure at n = 8, conditioning on the most frequent tower vector.
/// The tested position is layer-relative (first vertex of the first layer to
/// first of the third), so conditional on any decomposition with that vector
/// it is a free non-adjacent-layer bit: exactly Bernoulli(1/2).
fn fixed_tower_vector_check(seed: RngSeed) -> anyhow::Result<Option<String>> {
    const N: u32 = 8;
    const PICK_DRAWS: u64 = 50_000;
    const TEST_DRAWS: u64 = 800_000;
    const MIN_KEPT: u64 = 2_000;
    let sampler = TowerSampler::new(N, 0.5)?;

    let mut freq: HashMap<Vec<u32>, u32> = HashMap::new();
    for t in 0..PICK_DRAWS {
        let g = sampler.sample(seed.stream(t));
        let v = tower_decomposition(&g).expect("sampled DAGs decompose").vector().to_vec();
        if v.len() >= 3 {
            *freq.entry(v).or_insert(0) += 1;
        }
    }
    let Some((target, _)) = freq.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))) else {
        return Ok(Some("no three-layer tower vector observed".to_string()));
    };
    let target = target.clone();

    let mut kept = 0u64;
    let mut with_edge = 0u64;
    for t in 0..TEST_DRAWS {
        let g = sampler.sample(seed.stream(PICK_DRAWS + t));
        let layers = tower_decomposition(&g).expect("sampled DAGs decompose");
        if layers.vector() != target {
            continue;
        }
        kept += 1;
        let u = layers.layers()[0].first().expect("layers are nonempty");
        let w = layers.layers()[2].first().expect("layers are nonempty");
        if g.has_directed(u, w) {
            with_edge += 1;
        }
        if kept >= 60_000 {
            break;
        }
    }
    if kept < MIN_KEPT {
        return Ok(Some(format!(
            "tower-vector conditioning kept only {kept} draws; cannot resolve a 3-sigma band"
        )));
    }
    Ok(coin_band(with_edge, kept, "edge between non-adjacent layers given the tower vector"))
}
