use crate::eigen::DenseSymPair;
use crate::error::{Error, Result};
use crate::gaussian::triangle_weighted_nodes;
use crate::geometry::Mesh;

/// Gaussian-weighted P1 stiffness and mass on a mesh, with the axis vertices
/// optionally eliminated.
#[derive(Clone, Debug)]
pub struct AssembledSystem<'m> {
    pub pair: DenseSymPair<f64>,
    pub mesh: &'m Mesh,
    /// Vertices removed by the essential condition on the axis.
    pub constrained_dofs: Vec<usize>,
    /// Vertex → unknown, `None` for constrained vertices.
    pub dof_of: Vec<Option<usize>>,
    /// Unknown → vertex.
    pub vertex_of: Vec<usize>,
}

impl AssembledSystem<'_> {
    pub fn dofs(&self) -> usize {
        self.vertex_of.len()
    }

    /// Nodal values on the whole mesh, zero at constrained vertices.
    pub fn nodal(&self, v: &[f64]) -> Vec<f64> {
        self.dof_of.iter().map(|d| d.map_or(0.0, |i| v[i])).collect()
    }
}

/// K_ij = ∫ ∇φ_i·∇φ_j e^{−|x|²/2}, M_ij = ∫ φ_i φ_j e^{−|x|²/2}.
pub fn assemble(mesh: &Mesh, constrain_axis: bool) -> Result<AssembledSystem<'_>> {
    mesh.validate()?;
    let nv = mesh.vertices.len();
    let axis = mesh.axis_vertices();
    let mut dof_of = vec![None; nv];
    let mut vertex_of = Vec::with_capacity(nv);
    let mut constrained = Vec::new();
    for v in 0..nv {
        if constrain_axis && axis[v] {
            constrained.push(v);
        } else {
            dof_of[v] = Some(vertex_of.len());
            vertex_of.push(v);
        }
    }
    let n = vertex_of.len();
    if n == 0 {
        return Err(Error::Mesh("no free vertices left after the axis constraint".into()));
    }
    let mut k = vec![0.0; n * n];
    let mut m = vec![0.0; n * n];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let p = mesh.triangle(t);
        let twice_area = 2.0 * mesh.signed_area(t);
        // ∇λ_i = (y_{i+1} − y_{i+2}, x_{i+2} − x_{i+1}) / 2|T| for counter-clockwise vertices.
        let grad: [[f64; 2]; 3] = std::array::from_fn(|i| {
            let (b, c) = (p[(i + 1) % 3], p[(i + 2) % 3]);
            [(b[1] - c[1]) / twice_area, (c[0] - b[0]) / twice_area]
        });
        let mut local_m = [[0.0; 3]; 3];
        let mut weight = 0.0;
        for (l, w) in triangle_weighted_nodes(p)? {
            weight += w;
            for i in 0..3 {
                for j in 0..=i {
                    local_m[i][j] += w * l[i] * l[j];
                    local_m[j][i] = local_m[i][j];
                }
            }
        }
        for i in 0..3 {
            let Some(di) = dof_of[tri[i]] else { continue };
            for j in 0..3 {
                let Some(dj) = dof_of[tri[j]] else { continue };
                k[di * n + dj] += weight * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
                m[di * n + dj] += local_m[i][j];
            }
        }
    }
    Ok(AssembledSystem {
        pair: DenseSymPair::new(n, k, m)?,
        mesh,
        constrained_dofs: constrained,
        dof_of,
        vertex_of,
    })
}
