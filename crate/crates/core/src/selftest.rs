//! Differential self-test: random string trees checked against the
//! linear-algebra oracle.

use rayon::prelude::*;
use serde::Serialize;

use crate::ext::{arrow_multiset, ExtEngine};
use crate::gentle::{check_gentle_extensions, gentle_new_arrows};
use crate::oracle::Oracle;
use crate::presentation::StringPresentation;
use crate::random::{gen_random_string_tree, RandomSpec};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestConfig {
    /// Instance `k` uses seed `seed + k`.
    pub seed: u64,
    pub iterations: usize,
    /// Instance `k` has `1 + k % max_vertices` vertices.
    pub max_vertices: usize,
    pub relation_density: f64,
    pub gentle: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: DEFAULT_SEED,
            iterations: 200,
            max_vertices: 12,
            relation_density: 0.6,
            gentle: false,
        }
    }
}

impl SelftestConfig {
    pub fn instance(&self, k: usize) -> (u64, RandomSpec) {
        (
            self.seed.wrapping_add(k as u64),
            RandomSpec {
                vertices: 1 + k % self.max_vertices.max(1),
                relation_density: self.relation_density,
                gentle: self.gentle,
            },
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Generation,
    /// Witnesses exist exactly when the oracle's Ext is nonzero.
    ExtNonvanishing,
    /// Both oracle models give the same Ext dimension.
    ModelAgreement,
    /// New-arrow multiset equals the oracle's bimodule top.
    TopMultiset,
    /// Overlapping arrows equal the Ext engine's arrows.
    GentleFastPath,
    /// Tensor extension gentle, trivial extension monomial.
    GentleExtension,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestFailure {
    pub seed: u64,
    pub vertices: usize,
    pub check: CheckKind,
    pub detail: String,
    /// The failing instance in `.bqv` form, when it was generated.
    pub instance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<SelftestFailure>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All differential checks on one presentation; returns the number of
/// checks run and the failed ones.
pub fn check_instance(p: &StringPresentation) -> (usize, Vec<(CheckKind, String)>) {
    let oracle = Oracle::new(p);
    let engine = ExtEngine::new(p);
    let mut checks = 0;
    let mut failed = Vec::new();
    let name = |v| p.vertex_name(v).to_string();
    let top = engine.global_dimension().max(oracle.global_dimension());
    'ext: for i in 2..=top {
        for c in p.vertices() {
            for z in p.vertices() {
                checks += 2;
                let (proj, inj) = oracle.ext_dims(c, z, i);
                if proj != inj {
                    failed.push((
                        CheckKind::ModelAgreement,
                        format!("c={} z={} i={i}: {proj} vs {inj}", name(c), name(z)),
                    ));
                    break 'ext;
                }
                let witnessed = !engine.ext_witnesses(c, z, i).is_empty();
                if witnessed != (proj > 0) {
                    failed.push((
                        CheckKind::ExtNonvanishing,
                        format!(
                            "c={} z={} i={i}: witnesses {witnessed}, oracle dim {proj}",
                            name(c),
                            name(z)
                        ),
                    ));
                    break 'ext;
                }
            }
        }
    }
    let arrows = arrow_multiset(&engine.new_arrows());
    let expected = oracle.new_arrow_multiset();
    checks += 1;
    if arrows != expected {
        failed.push((
            CheckKind::TopMultiset,
            format!(
                "engine {} vs oracle {}",
                show(p, &arrows),
                show(p, &expected)
            ),
        ));
    }
    if p.validate().is_gentle {
        checks += 2;
        match gentle_new_arrows(p) {
            Ok(g) if arrow_multiset(&g) == arrows => {}
            Ok(g) => failed.push((
                CheckKind::GentleFastPath,
                format!(
                    "overlappings {} vs engine {}",
                    show(p, &arrow_multiset(&g)),
                    show(p, &arrows)
                ),
            )),
            Err(e) => failed.push((CheckKind::GentleFastPath, e.to_string())),
        }
        match check_gentle_extensions(p) {
            Ok(r) if r.tensor_gentle && r.tensor_quadratic && r.trivial_monomial => {}
            Ok(r) => failed.push((
                CheckKind::GentleExtension,
                format!(
                    "tensor gentle {}, quadratic {}, trivial monomial {}",
                    r.tensor_gentle, r.tensor_quadratic, r.trivial_monomial
                ),
            )),
            Err(e) => failed.push((CheckKind::GentleExtension, e.to_string())),
        }
    }
    (checks, failed)
}

fn show(p: &StringPresentation, ms: &[(crate::Vertex, crate::Vertex, usize)]) -> String {
    let items: Vec<String> = ms
        .iter()
        .map(|(z, c, i)| format!("{}->{}@{i}", p.vertex_name(*z), p.vertex_name(*c)))
        .collect();
    format!("{{{}}}", items.join(", "))
}

/// Run `cfg.iterations` instances in parallel. Failures are sorted by seed.
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let results: Vec<(usize, Vec<SelftestFailure>)> = (0..cfg.iterations)
        .into_par_iter()
        .map(|k| {
            let (seed, spec) = cfg.instance(k);
            match gen_random_string_tree(seed, spec) {
                Ok(p) => {
                    let (checks, failed) = check_instance(&p);
                    let failures = failed
                        .into_iter()
                        .map(|(check, detail)| SelftestFailure {
                            seed,
                            vertices: spec.vertices,
                            check,
                            detail,
                            instance: Some(p.to_bqv()),
                        })
                        .collect();
                    (checks, failures)
                }
                Err(e) => (
                    1,
                    vec![SelftestFailure {
                        seed,
                        vertices: spec.vertices,
                        check: CheckKind::Generation,
                        detail: e.to_string(),
                        instance: None,
                    }],
                ),
            }
        })
        .collect();
    let mut failures: Vec<SelftestFailure> = Vec::new();
    let mut checks = 0;
    for (c, f) in results {
        checks += c;
        failures.extend(f);
    }
    failures.sort_by_key(|f| (f.seed, f.check));
    if !failures.is_empty() {
        log::warn!("selftest: {} failures", failures.len());
    }
    SelftestReport {
        instances: cfg.iterations,
        checks,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_iterations() {
        let r = run_selftest(&SelftestConfig {
            iterations: 0,
            ..SelftestConfig::default()
        });
        assert!(r.passed());
        assert_eq!((r.instances, r.checks), (0, 0));
    }

    #[test]
    fn small_run_passes() {
        let cfg = SelftestConfig {
            iterations: 24,
            max_vertices: 8,
            ..SelftestConfig::default()
        };
        let r = run_selftest(&cfg);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r, run_selftest(&cfg));
    }

    #[test]
    fn fixtures_pass() {
        for (name, p) in crate::fixtures::all() {
            let (_, failed) = check_instance(&p);
            assert!(failed.is_empty(), "{name}: {failed:?}");
        }
    }
}
