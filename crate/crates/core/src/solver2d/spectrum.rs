use serde::{Deserialize, Serialize};

use super::assemble::assemble;
use crate::eigen::eigs_generalized_sym;
use crate::error::{Error, Result};
use crate::geometry::{half_domain, triangulate_half, Domain, Mesh};
use crate::richardson::{extrapolate3, Extrapolation};

/// Number of nested mesh levels: base at 4h, then two red refinements.
pub const LEVELS: usize = 3;

/// Neumann values below this are the constant mode.
pub const TRIVIAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    /// Neumann on the axis: modes even in x.
    Even,
    /// Dirichlet on the axis: modes odd in x.
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    /// Full Neumann spectrum, values[0] ≈ 0.
    Neumann,
    /// Odd modes only; values are Rayleigh–Ritz upper bounds.
    Odd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub h: f64,
    pub dofs: usize,
    pub values: Vec<f64>,
}

/// Eigenvectors of the finest level on the half mesh, one column per value.
#[derive(Clone, Debug, PartialEq)]
pub struct Modes {
    pub mesh: Mesh,
    pub vectors: Vec<Vec<f64>>,
    pub symmetry: Vec<Symmetry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum2D {
    pub kind: SpectrumKind,
    /// Finest-level values, ascending.
    pub values: Vec<f64>,
    /// Realized h of the finest mesh.
    pub mesh_h: f64,
    pub truncation_n: Option<u32>,
    /// Per-index Richardson over the levels.
    pub extrapolated: Vec<Extrapolation<f64>>,
    pub levels: Vec<Level>,
    #[serde(skip)]
    pub modes: Option<Modes>,
}

impl Spectrum2D {
    /// Best estimate of values[i]: extrapolated when trusted, else the finest value.
    pub fn best(&self, i: usize) -> f64 {
        self.extrapolated.get(i).map_or(self.values[i], |e| e.value)
    }

    /// Index of μ₁: 1 for Neumann spectra (skipping the constant), 0 for odd ones.
    pub fn first_nontrivial(&self) -> usize {
        match self.kind {
            SpectrumKind::Neumann => 1,
            SpectrumKind::Odd => 0,
        }
    }

    pub fn mu1(&self) -> f64 {
        self.best(self.first_nontrivial())
    }

    /// The Galerkin values bound the polygonal-surrogate eigenvalues from above.
    pub fn bound_direction(&self) -> &'static str {
        "upper"
    }

    pub const CSV_HEADER: &'static str = "index,value,extrapolated,order,mesh_h,truncation_n";

    pub fn csv_rows(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.values.iter().enumerate() {
            let e = self.extrapolated.get(i);
            let opt = |x: Option<f64>| x.map(|x| format!("{x:.12e}")).unwrap_or_default();
            s += &format!(
                "{i},{v:.12e},{},{},{:.12e},{}\n",
                opt(e.filter(|e| e.extrapolated).map(|e| e.value)),
                opt(e.and_then(|e| e.order)),
                self.mesh_h,
                self.truncation_n.map(|n| n.to_string()).unwrap_or_default()
            );
        }
        s
    }

    /// Half mesh in the ASCII format with one nodal column per mode.
    pub fn modes_ascii(&self) -> Option<String> {
        let modes = self.modes.as_ref()?;
        let names: Vec<String> = (0..modes.vectors.len()).map(|i| format!("mode{i}")).collect();
        let cols: Vec<(&str, &[f64])> =
            names.iter().zip(&modes.vectors).map(|(n, v)| (n.as_str(), v.as_slice())).collect();
        Some(modes.mesh.to_ascii(&cols))
    }
}

/// The three nested half meshes with finest size ≈ h (smaller on narrow domains).
pub fn nested_half_meshes(domain: &Domain, h: f64) -> Result<Vec<Mesh>> {
    if !domain.is_bounded() {
        return Err(Error::Unsupported("2-D solves need a bounded domain; use solve_unbounded".into()));
    }
    // At least two coarse elements across the half-width, so all three levels
    // sit in the asymptotic regime of narrow domains.
    let base = triangulate_half(&half_domain(domain), (4.0 * h).min(0.5 * domain.half_width()))?;
    let mut meshes = vec![base];
    for _ in 1..LEVELS {
        let next = meshes.last().expect("non-empty").refine()?;
        meshes.push(next);
    }
    Ok(meshes)
}

/// Lowest `k` eigenpairs of one symmetry class, eigenvectors as nodal values.
fn half_solve(mesh: &Mesh, symmetry: Symmetry, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let sys = assemble(mesh, symmetry == Symmetry::Odd)?;
    let k = k.min(sys.dofs());
    let res = eigs_generalized_sym(&sys.pair, k)?;
    let vectors = res.vectors.unwrap_or_default().iter().map(|v| sys.nodal(v)).collect();
    Ok((res.values, vectors))
}

/// Per-level eigenpairs of one symmetry class, eigenvectors only on the finest level.
struct ClassSolve {
    symmetry: Symmetry,
    levels: Vec<Vec<f64>>,
    vectors: Vec<Vec<f64>>,
}

fn solve_class(meshes: &[Mesh], symmetry: Symmetry, k: usize) -> Result<ClassSolve> {
    let mut levels = Vec::with_capacity(meshes.len());
    let mut vectors = Vec::new();
    for mesh in meshes {
        let (values, v) = half_solve(mesh, symmetry, k)?;
        levels.push(values);
        vectors = v;
    }
    Ok(ClassSolve { symmetry, levels, vectors })
}

fn build(meshes: &[Mesh], classes: &[&ClassSolve], k: usize, kind: SpectrumKind) -> Result<Spectrum2D> {
    let mut levels = Vec::with_capacity(meshes.len());
    for (li, mesh) in meshes.iter().enumerate() {
        let mut values: Vec<f64> = classes.iter().flat_map(|c| c.levels[li].iter().copied()).collect();
        values.sort_by(f64::total_cmp);
        if values.len() < k {
            return Err(Error::Size { k, n: values.len() });
        }
        values.truncate(k);
        levels.push(Level { h: mesh.h, dofs: mesh.vertices.len(), values });
    }
    let mut finest: Vec<(f64, &Vec<f64>, Symmetry)> = classes
        .iter()
        .flat_map(|c| c.levels[meshes.len() - 1].iter().zip(&c.vectors).map(move |(&v, x)| (v, x, c.symmetry)))
        .collect();
    finest.sort_by(|a, b| a.0.total_cmp(&b.0));
    finest.truncate(k);
    let modes = Modes {
        mesh: meshes[meshes.len() - 1].clone(),
        vectors: finest.iter().map(|m| m.1.clone()).collect(),
        symmetry: finest.iter().map(|m| m.2).collect(),
    };
    let last = levels.len() - 1;
    let extrapolated = (0..k)
        .map(|i| {
            let v = |l: usize| levels[l].values[i];
            if kind == SpectrumKind::Neumann && i == 0 {
                Extrapolation { fine: v(last), value: v(last), order: None, extrapolated: false, warning: None }
            } else {
                extrapolate3(v(0), v(1), v(2))
            }
        })
        .collect();
    let fine = &levels[last];
    if kind == SpectrumKind::Neumann && !(fine.values[0].abs() <= TRIVIAL_TOL) {
        return Err(Error::Precision(format!("constant mode not recovered: λ₀ = {:e}", fine.values[0])));
    }
    Ok(Spectrum2D {
        kind,
        values: fine.values.clone(),
        mesh_h: fine.h,
        truncation_n: None,
        extrapolated,
        levels,
        modes: Some(modes),
    })
}

/// The Neumann spectrum and the odd spectrum from one set of solves.
pub fn neumann_and_odd(domain: &Domain, h: f64, k: usize) -> Result<(Spectrum2D, Spectrum2D)> {
    if k < 2 {
        return Err(Error::Parameter(format!("need k ≥ 2 Neumann eigenvalues, got {k}")));
    }
    let meshes = nested_half_meshes(domain, h)?;
    let even = solve_class(&meshes, Symmetry::Even, k)?;
    let odd = solve_class(&meshes, Symmetry::Odd, k)?;
    let full = build(&meshes, &[&even, &odd], k, SpectrumKind::Neumann)?;
    let k_odd = odd.levels.iter().map(Vec::len).min().unwrap_or(0).min(k);
    Ok((full, build(&meshes, &[&odd], k_odd, SpectrumKind::Odd)?))
}

/// Lowest `k` Neumann eigenvalues (including the zero mode) of a bounded
/// domain. The mesh is the mirror image of a half mesh, so the pencil splits
/// exactly into even and odd parts, solved separately on the half.
pub fn neumann_spectrum(domain: &Domain, h: f64, k: usize) -> Result<Spectrum2D> {
    if k < 2 {
        return Err(Error::Parameter(format!("need k ≥ 2 Neumann eigenvalues, got {k}")));
    }
    let meshes = nested_half_meshes(domain, h)?;
    let even = solve_class(&meshes, Symmetry::Even, k)?;
    let odd = solve_class(&meshes, Symmetry::Odd, k)?;
    build(&meshes, &[&even, &odd], k, SpectrumKind::Neumann)
}

/// Lowest `k` eigenvalues with x-odd eigenfunctions.
pub fn odd_spectrum(domain: &Domain, h: f64, k: usize) -> Result<Spectrum2D> {
    if k == 0 {
        return Err(Error::Parameter("need at least one eigenvalue".into()));
    }
    let meshes = nested_half_meshes(domain, h)?;
    let odd = solve_class(&meshes, Symmetry::Odd, k)?;
    build(&meshes, &[&odd], k, SpectrumKind::Odd)
}

/// μ₁ᵒᵈᵈ: ground state of the half domain with u = 0 on the axis.
pub fn mu1_odd(domain: &Domain, h: f64) -> Result<Spectrum2D> {
    odd_spectrum(domain, h, 1)
}
