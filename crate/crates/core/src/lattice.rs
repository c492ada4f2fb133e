//! Point-set optimization on the positive octant of the 2-sphere.
//!
//! The vertices of `S(3, K)⁺` (nonnegative integer triples summing to `K`)
//! are placed on `S₂⁺` and moved to minimize `Σ_e ‖x_a − x_b‖⁴` over
//! lattice edges, a proxy for the quantization MSE of the resulting
//! codebook. Starting from the radial projection, the optimum pulls the
//! central points together and spreads the boundary ones.

use std::io::Write;

use crate::error::{contract, Error, Result};

/// Vertices and neighbor edges of the `L = 3` positive pyramid lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGraph {
    k: u32,
    vertices: Vec<[u32; 3]>,
    edges: Vec<(usize, usize)>,
}

impl LatticeGraph {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn vertices(&self) -> &[[u32; 3]] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, v: [u32; 3]) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Vertices with all mass on one axis. They already lie on `S₂`.
    pub fn is_corner(&self, i: usize) -> bool {
        self.vertices[i].iter().filter(|&&c| c != 0).count() == 1
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == i || b == i).count()
    }

    /// Edges incident to `i`.
    pub fn incident(&self, i: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied().filter(move |&(a, b)| a == i || b == i)
    }
}

/// Builds the lattice for precision `k ≥ 1`. Vertex ids run over
/// `a = 0..=k`, then `b = 0..=k−a`, with `c = k − a − b`.
pub fn build_lattice(k: u32) -> Result<LatticeGraph> {
    if k == 0 {
        return Err(contract("lattice precision K must be at least 1"));
    }
    let mut vertices = Vec::new();
    for a in 0..=k {
        for b in 0..=k - a {
            vertices.push([a, b, k - a - b]);
        }
    }
    let id = |v: [u32; 3]| -> usize {
        // position of (a, b, ·): rows a' < a hold (k − a' + 1) vertices each
        let (a, b) = (v[0] as usize, v[1] as usize);
        let kk = k as usize;
        a * (kk + 1) - a * a.saturating_sub(1) / 2 + b
    };
    debug_assert!(vertices.iter().enumerate().all(|(i, &v)| id(v) == i));
    let mut edges = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        for from in 0..3 {
            if v[from] == 0 {
                continue;
            }
            for to in 0..3 {
                if to == from {
                    continue;
                }
                let mut w = v;
                w[from] -= 1;
                w[to] += 1;
                let j = id(w);
                if j > i {
                    edges.push((i, j));
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(LatticeGraph { k, vertices, edges })
}

/// One point of `S₂⁺` per lattice vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    points: Vec<[f64; 3]>,
}

impl PointConfiguration {
    pub fn new(points: Vec<[f64; 3]>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if p.iter().any(|c| *c < 0.0) || (n - 1.0).abs() > 1e-9 {
                return Err(contract(format!("point {i} = {p:?} is not on the positive unit sphere")));
            }
        }
        Ok(Self { points })
    }

    /// The radial projection `v / ‖v‖₂` of every vertex.
    pub fn radial(graph: &LatticeGraph) -> Self {
        let points = graph
            .vertices
            .iter()
            .map(|v| {
                let f = v.map(f64::from);
                let n = (f[0] * f[0] + f[1] * f[1] + f[2] * f[2]).sqrt();
                f.map(|c| c / n)
            })
            .collect();
        Self { points }
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Writes `vertex_id,a,b,c` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["vertex_id", "a", "b", "c"])?;
        for (i, p) in self.points.iter().enumerate() {
            w.write_record([i.to_string(), format!("{:.12}", p[0]), format!("{:.12}", p[1]), format!("{:.12}", p[2])])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check(config: &PointConfiguration, graph: &LatticeGraph) -> Result<()> {
    if config.len() != graph.vertices.len() {
        return Err(contract(format!(
            "configuration has {} points, lattice has {} vertices",
            config.len(),
            graph.vertices.len()
        )));
    }
    Ok(())
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn len2(d: [f64; 3]) -> f64 {
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

fn objective_raw(points: &[[f64; 3]], edges: &[(usize, usize)]) -> f64 {
    edges.iter().map(|&(a, b)| len2(sub(points[a], points[b])).powi(2)).sum()
}

/// `Σ_e ‖x_a − x_b‖⁴` over lattice edges.
pub fn edge_objective(config: &PointConfiguration, graph: &LatticeGraph) -> Result<f64> {
    check(config, graph)?;
    Ok(objective_raw(&config.points, &graph.edges))
}

/// Gradient of [`edge_objective`] with respect to every point coordinate.
pub fn edge_gradient(config: &PointConfiguration, graph: &LatticeGraph) -> Result<Vec<[f64; 3]>> {
    check(config, graph)?;
    Ok(gradient_raw(&config.points, &graph.edges))
}

fn gradient_raw(points: &[[f64; 3]], edges: &[(usize, usize)]) -> Vec<[f64; 3]> {
    let mut g = vec![[0.0; 3]; points.len()];
    for &(a, b) in edges {
        let d = sub(points[a], points[b]);
        let s = 4.0 * len2(d);
        for c in 0..3 {
            g[a][c] += s * d[c];
            g[b][c] -= s * d[c];
        }
    }
    g
}

/// Mean and variance of the edge lengths.
pub fn edge_length_stats(config: &PointConfiguration, graph: &LatticeGraph) -> (f64, f64) {
    let lens: Vec<f64> = graph.edges.iter().map(|&(a, b)| len2(sub(config.points[a], config.points[b])).sqrt()).collect();
    let n = lens.len() as f64;
    let mean = lens.iter().sum::<f64>() / n;
    let var = lens.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / n;
    (mean, var)
}

/// Mean length of the edges around the vertex nearest the barycenter.
pub fn central_edge_length(config: &PointConfiguration, graph: &LatticeGraph) -> f64 {
    let k = graph.k as f64;
    let center = (0..graph.vertices.len())
        .min_by(|&i, &j| {
            let d = |v: [u32; 3]| v.iter().map(|&c| (f64::from(c) - k / 3.0).powi(2)).sum::<f64>();
            d(graph.vertices[i]).total_cmp(&d(graph.vertices[j]))
        })
        .expect("lattice is nonempty");
    let lens: Vec<f64> = graph.incident(center).map(|(a, b)| len2(sub(config.points[a], config.points[b])).sqrt()).collect();
    lens.iter().sum::<f64>() / lens.len().max(1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    pub max_steps: usize,
    pub step_size: f64,
    /// Stop once `|ΔF| / F` of an accepted step drops below this.
    pub rel_tol: f64,
    pub max_halvings: u32,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self { max_steps: 10_000, step_size: 1.0, rel_tol: 1e-10, max_halvings: 30 }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub config: PointConfiguration,
    /// Objective before the first step and after every accepted step.
    pub trace: Vec<f64>,
    pub steps: usize,
}

/// Projected gradient descent with step halving.
///
/// Each trial step moves every non-corner point against its gradient,
/// clamps negative coordinates to zero and renormalizes onto `S₂`. A step
/// that raises the objective is retried at half the step size; after
/// `max_halvings` consecutive failures the run stops.
pub fn optimize(
    graph: &LatticeGraph,
    initial: &PointConfiguration,
    settings: OptimizerSettings,
) -> Result<OptimizeOutcome> {
    check(initial, graph)?;
    let free: Vec<usize> = (0..graph.vertices.len()).filter(|&i| !graph.is_corner(i)).collect();
    let mut points = initial.points.clone();
    let mut f = objective_raw(&points, &graph.edges);
    let mut trace = vec![f];
    let mut eta = settings.step_size;
    let mut steps = 0;
    let mut trial = points.clone();
    while steps < settings.max_steps {
        let g = gradient_raw(&points, &graph.edges);
        for &i in &free {
            if g[i].iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite { vertex: i, step: steps });
            }
        }
        let mut accepted = None;
        for _ in 0..=settings.max_halvings {
            trial.copy_from_slice(&points);
            for &i in &free {
                let mut p = [0.0; 3];
                for c in 0..3 {
                    p[c] = (points[i][c] - eta * g[i][c]).max(0.0);
                }
                let n = len2(p).sqrt();
                // a point pushed out of the octant entirely keeps its place
                if n > 0.0 {
                    trial[i] = p.map(|c| c / n);
                }
            }
            let ft = objective_raw(&trial, &graph.edges);
            if ft <= f {
                accepted = Some(ft);
                break;
            }
            eta *= 0.5;
        }
        let Some(ft) = accepted else { break };
        std::mem::swap(&mut points, &mut trial);
        steps += 1;
        let rel = (f - ft) / f.max(f64::MIN_POSITIVE);
        f = ft;
        trace.push(f);
        if rel < settings.rel_tol {
            break;
        }
    }
    Ok(OptimizeOutcome { config: PointConfiguration { points }, trace, steps })
}
