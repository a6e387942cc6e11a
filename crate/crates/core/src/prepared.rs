//! A mesh bundled with its triangulation, nearest-neighbour index and the
//! enclosing triangle of every grid pixel.

use crate::error::{Error, Result};
use crate::kdtree::{KdTree, Neighbor};
use crate::mesh::MeshSamples;
use crate::triangulation::{TriangleId, Triangulation};

#[derive(Clone, Debug)]
pub struct PreparedMesh {
    mesh: MeshSamples,
    tri: Option<Triangulation>,
    kd: KdTree,
    pixel_tri: Vec<Option<TriangleId>>,
}

impl PreparedMesh {
    /// Indexes a non-empty mesh. A degenerate point set (fewer than three
    /// points or all collinear) yields no triangulation; every pixel is
    /// then treated as outside the hull.
    pub fn new(mesh: MeshSamples) -> Result<Self> {
        if mesh.is_empty() {
            return Err(Error::Validation("mesh has no samples".into()));
        }
        let tri = match Triangulation::from_mesh(&mesh) {
            Ok(t) => Some(t),
            Err(Error::DegenerateInput(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(PreparedMesh::with_triangulation(mesh, tri))
    }

    /// Uses a caller-supplied triangulation, which must have been built from
    /// the positions of `mesh` in order.
    pub fn with_triangulation(mesh: MeshSamples, tri: Option<Triangulation>) -> Self {
        let kd = KdTree::new(mesh.samples().iter().map(|s| [s.x, s.y]).collect());
        let pixel_tri = match &tri {
            Some(t) => t.locate_grid(mesh.width(), mesh.height()),
            None => vec![None; mesh.width() * mesh.height()],
        };
        PreparedMesh {
            mesh,
            tri,
            kd,
            pixel_tri,
        }
    }

    pub fn mesh(&self) -> &MeshSamples {
        &self.mesh
    }

    pub fn triangulation(&self) -> Option<&Triangulation> {
        self.tri.as_ref()
    }

    pub fn kdtree(&self) -> &KdTree {
        &self.kd
    }

    pub fn width(&self) -> usize {
        self.mesh.width()
    }

    pub fn height(&self) -> usize {
        self.mesh.height()
    }

    /// Enclosing triangle of grid pixel `(x, y)`, `None` outside the hull.
    #[inline]
    pub fn pixel_triangle(&self, x: usize, y: usize) -> Option<TriangleId> {
        self.pixel_tri[y * self.mesh.width() + x]
    }

    /// Sample indices of the enclosing triangle, or of the three nearest
    /// samples (fewer if the mesh is smaller) outside the hull.
    pub fn support(&self, x: usize, y: usize) -> Support {
        match (self.pixel_triangle(x, y), &self.tri) {
            (Some(t), Some(tri)) => Support::Triangle(t, tri.triangles()[t]),
            _ => {
                let near = self.kd.k_nearest([x as f64, y as f64], 3);
                Support::Nearest(near)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    Triangle(TriangleId, [usize; 3]),
    Nearest(Vec<Neighbor>),
}

impl Support {
    pub fn indices(&self) -> Vec<usize> {
        match self {
            Support::Triangle(_, v) => v.to_vec(),
            Support::Nearest(n) => n.iter().map(|n| n.index).collect(),
        }
    }
}
