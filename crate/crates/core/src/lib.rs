pub mod denoise;
pub mod error;
pub mod harness;
pub mod image;
pub mod interpolate;
pub mod kdtree;
pub mod mesh;
pub mod prepared;
pub mod reliability;
pub mod training;
pub mod triangulation;

pub use denoise::{refine, strength_map, DctDenoiser, Denoiser};
pub use denoise::{ModelParams, StrengthMap};
pub use error::{Error, Result};
pub use harness::{antialias, evaluate, simulate_mesh, EvalConfig, SimConfig};
pub use image::{psnr, Image};
pub use interpolate::{reconstruct_initial, Method};
pub use mesh::{MeshSamples, Sample};
pub use prepared::PreparedMesh;
pub use reliability::ReliabilityMap;
pub use training::{fit_parameters, ParamsStore, SearchGrids, TrainingResult};
pub use triangulation::{Location, TriangleId, Triangulation};
