//! Laplacian linear systems `L p = b`.
//!
//! The iterative solver is Jacobi-preconditioned conjugate gradient with the
//! iterate projected onto the complement of the Laplacian's null space (one
//! constant vector per connected component). Each call to
//! [`LaplacianSystem::solve`] owns its scratch vectors, so one system can be
//! shared across threads.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{Components, Graph};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Largest node count accepted by the dense routines.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Debug, Clone)]
pub struct LaplacianSystem<'g> {
    graph: &'g Graph,
    components: Components,
    component_sizes: Vec<usize>,
    inv_diag: Vec<f64>,
    tolerance: f64,
    max_iterations: usize,
}

impl<'g> LaplacianSystem<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self::with_tolerance(graph, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(graph: &'g Graph, tolerance: f64) -> Self {
        let components = graph.components();
        let mut component_sizes = vec![0usize; components.count];
        for &c in &components.label {
            component_sizes[c] += 1;
        }
        let inv_diag = (0..graph.node_count())
            .map(|v| match graph.degree(v) {
                0 => 0.0,
                d => 1.0 / d as f64,
            })
            .collect();
        let n = graph.node_count();
        LaplacianSystem {
            graph,
            components,
            component_sizes,
            inv_diag,
            tolerance,
            max_iterations: (20 * n).max(1000),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Subtracts each component's mean from its entries.
    fn project(&self, x: &mut [f64]) {
        let mut sums = vec![0.0; self.components.count];
        for (v, &c) in self.components.label.iter().enumerate() {
            sums[c] += x[v];
        }
        for (v, &c) in self.components.label.iter().enumerate() {
            x[v] -= sums[c] / self.component_sizes[c] as f64;
        }
    }

    fn check_rhs(&self, b: &[f64]) -> Result<()> {
        let n = self.graph.node_count();
        if b.len() != n {
            return Err(Error::InvalidInput(format!(
                "right-hand side has length {} but graph has {n} nodes",
                b.len()
            )));
        }
        let scale = b.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        let slack = 1e-10 * scale;
        if b.iter().sum::<f64>().abs() > slack {
            return Err(Error::InvalidInput(
                "right-hand side must sum to zero".into(),
            ));
        }
        let mut sums = vec![0.0; self.components.count];
        for (v, &c) in self.components.label.iter().enumerate() {
            sums[c] += b[v];
        }
        if sums.iter().any(|s| s.abs() > slack) {
            return Err(Error::SingularSystem(
                "right-hand side spans more than one connected component".into(),
            ));
        }
        Ok(())
    }

    /// Solves `L p = b` for the mean-zero (minimum-norm) `p`.
    ///
    /// `b` must sum to zero on every connected component. The returned
    /// solution satisfies `‖L p − b‖∞ ≤ tolerance`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_rhs(b)?;
        let g = self.graph;
        let n = g.node_count();

        let mut rhs = b.to_vec();
        self.project(&mut rhs);

        let mut x = vec![0.0; n];
        let mut r = rhs.clone();
        let mut z: Vec<f64> = r.iter().zip(&self.inv_diag).map(|(a, d)| a * d).collect();
        self.project(&mut z);
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz: f64 = dot(&r, &z);

        let mut iterations = 0;
        let mut residual = inf_norm(&r);
        while residual > self.tolerance {
            if iterations >= self.max_iterations {
                return Err(Error::NotConverged {
                    what: "laplacian solve",
                    iterations,
                    residual,
                });
            }
            g.laplacian_apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                break;
            }
            let step = rz / pap;
            for i in 0..n {
                x[i] += step * p[i];
                r[i] -= step * ap[i];
            }
            iterations += 1;
            // Refresh the recursive residual now and then to stop drift.
            if iterations % 50 == 0 {
                g.laplacian_apply(&x, &mut ap);
                for i in 0..n {
                    r[i] = rhs[i] - ap[i];
                }
            }
            residual = inf_norm(&r);
            for i in 0..n {
                z[i] = r[i] * self.inv_diag[i];
            }
            self.project(&mut z);
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }

        self.project(&mut x);
        g.laplacian_apply(&x, &mut ap);
        let true_residual = ap
            .iter()
            .zip(b)
            .map(|(a, bb)| (a - bb).abs())
            .fold(0.0, f64::max);
        if true_residual > self.tolerance {
            return Err(Error::NotConverged {
                what: "laplacian solve",
                iterations,
                residual: true_residual,
            });
        }
        Ok(x)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Dense Laplacian matrix.
pub fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut l = DMatrix::zeros(n, n);
    for v in 0..n {
        l[(v, v)] = g.degree(v) as f64;
        for &w in g.neighbors(v) {
            l[(v, w)] = -1.0;
        }
    }
    l
}

/// Moore-Penrose pseudoinverse of the Laplacian, computed as
/// `(L + P)^{-1} − P` where `P` projects onto the per-component constants.
pub fn dense_pseudoinverse(g: &Graph) -> Result<DMatrix<f64>> {
    let n = g.node_count();
    if n > DENSE_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "dense pseudoinverse limited to {DENSE_LIMIT} nodes, graph has {n}"
        )));
    }
    let comps = g.components();
    let mut sizes = vec![0usize; comps.count];
    for &c in &comps.label {
        sizes[c] += 1;
    }
    let mut projector = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in 0..n {
            if comps.label[u] == comps.label[v] {
                projector[(u, v)] = 1.0 / sizes[comps.label[u]] as f64;
            }
        }
    }
    let shifted = dense_laplacian(g) + &projector;
    let inv = shifted
        .try_inverse()
        .ok_or_else(|| Error::SingularSystem("shifted Laplacian not invertible".into()))?;
    Ok(inv - projector)
}
