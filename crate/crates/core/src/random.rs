//! Seeded random string (and gentle) tree presentations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::presentation::{PresentationBuilder, StringPresentation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub vertices: usize,
    /// In `[0, 1]`: how eagerly composable arrow pairs are made zero, and
    /// how many longer relations are added.
    pub relation_density: f64,
    pub gentle: bool,
}

const MAX_ATTEMPTS: usize = 64;

/// A random string tree, reproducible per seed. With `gentle`, the result
/// is also gentle.
pub fn gen_random_string_tree(seed: u64, spec: RandomSpec) -> Result<StringPresentation> {
    assert!(spec.vertices >= 1, "at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let p = attempt(&mut rng, spec);
        let report = p.validate();
        if report.is_string_tree() && (!spec.gentle || report.is_gentle) {
            return Ok(p);
        }
    }
    Err(Error::GenerationFailed(MAX_ATTEMPTS))
}

fn attempt(rng: &mut ChaCha8Rng, spec: RandomSpec) -> StringPresentation {
    let n = spec.vertices;
    let density = spec.relation_density.clamp(0.0, 1.0);
    let mut inc = vec![Vec::new(); n];
    let mut out = vec![Vec::new(); n];
    let mut arrows: Vec<(usize, usize)> = Vec::new();
    for k in 1..n {
        // attach k to an earlier vertex with spare capacity
        loop {
            let u = rng.gen_range(0..k);
            let forward = rng.gen_bool(0.5);
            let (s, t) = if forward { (u, k) } else { (k, u) };
            let spare = if forward {
                out[u].len() < 2
            } else {
                inc[u].len() < 2
            };
            if spare {
                let id = arrows.len();
                arrows.push((s, t));
                out[s].push(id);
                inc[t].push(id);
                break;
            }
        }
    }
    // length-2 relations: at each vertex the nonzero pairs form a matching
    // between incoming and outgoing arrows
    let mut zero_pairs: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        let mut ins = inc[v].clone();
        let mut outs = out[v].clone();
        if ins.is_empty() || outs.is_empty() {
            continue;
        }
        ins.shuffle(rng);
        outs.shuffle(rng);
        let mut nonzero = Vec::new();
        for (g, d) in ins.iter().zip(&outs) {
            let forced = spec.gentle && (ins.len() == 2 || outs.len() == 2);
            if forced || !rng.gen_bool(density) {
                nonzero.push((*g, *d));
            }
        }
        for g in &ins {
            for d in &outs {
                if !nonzero.contains(&(*g, *d)) {
                    zero_pairs.push((*g, *d));
                }
            }
        }
    }
    let name = |a: usize| format!("a{}", a + 1);
    let mut builder = PresentationBuilder::new().vertices((1..=n).map(|i| i.to_string()));
    for (i, (s, t)) in arrows.iter().enumerate() {
        builder = builder.arrow(name(i), (s + 1).to_string(), (t + 1).to_string());
    }
    for (g, d) in &zero_pairs {
        builder = builder.relation([name(*g), name(*d)]);
    }
    let base = builder
        .clone()
        .build()
        .expect("generated presentation is well formed");
    if spec.gentle {
        return base;
    }
    // longer relations along nonzero paths
    let extra = (density * n as f64 / 3.0).round() as usize;
    let mut longer: Vec<Vec<String>> = Vec::new();
    let mut current = base;
    for _ in 0..extra {
        let v = crate::presentation::Vertex(rng.gen_range(0..n));
        let candidates: Vec<_> = current
            .nonzero_paths_from(v)
            .into_iter()
            .filter(|p| p.len() >= 3)
            .collect();
        let Some(path) = candidates.choose(rng) else {
            continue;
        };
        let names: Vec<String> = path
            .arrows
            .iter()
            .map(|a| current.arrow_name(*a).to_string())
            .collect();
        longer.push(names);
        let mut b = builder.clone();
        for r in &longer {
            b = b.relation(r.clone());
        }
        current = b.build().expect("generated presentation is well formed");
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let p = gen_random_string_tree(
            1,
            RandomSpec {
                vertices: 1,
                relation_density: 0.5,
                gentle: false,
            },
        )
        .unwrap();
        assert_eq!(p.vertex_count(), 1);
        assert!(p.arrows().is_empty());
    }

    #[test]
    fn deterministic_and_valid() {
        for seed in 0..50 {
            for gentle in [false, true] {
                let spec = RandomSpec {
                    vertices: 1 + (seed as usize % 12),
                    relation_density: 0.5,
                    gentle,
                };
                let a = gen_random_string_tree(seed, spec).unwrap();
                let b = gen_random_string_tree(seed, spec).unwrap();
                assert_eq!(a.to_bqv(), b.to_bqv());
                let r = a.validate();
                assert!(r.is_string_tree());
                if gentle {
                    assert!(r.is_gentle);
                }
            }
        }
    }
}
