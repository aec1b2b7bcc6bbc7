//! Uniform voxel discretization of the part with substrate and atmosphere
//! adjacency bookkeeping.

use crate::error::{Error, Result};

/// 3D occupancy grid. `x` is the fastest axis, `z` the slowest; `z = 0` is
/// the layer sitting on the substrate.
#[derive(Debug, Clone)]
pub struct OccupancyGrid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    /// Row-major over (z, y, x): index = (z * ny + y) * nx + x.
    pub occupied: Vec<bool>,
}

impl OccupancyGrid {
    pub fn full(nx: usize, ny: usize, nz: usize) -> Self {
        Self {
            nx,
            ny,
            nz,
            occupied: vec![true; nx * ny * nz],
        }
    }

    pub fn empty(nx: usize, ny: usize, nz: usize) -> Self {
        Self {
            nx,
            ny,
            nz,
            occupied: vec![false; nx * ny * nz],
        }
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize, z: usize) -> usize {
        (z * self.ny + y) * self.nx + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        self.occupied[self.idx(x, y, z)]
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, v: bool) {
        let i = self.idx(x, y, z);
        self.occupied[i] = v;
    }
}

/// Finite-volume mesh over occupied voxels of a uniform grid.
///
/// Cell ordering is lexicographic by (z, y, x) and therefore deterministic
/// for a given occupancy. The surface set contains exactly the cells whose
/// top (+z) face is exposed.
#[derive(Debug, Clone)]
pub struct Mesh {
    /// Grid extents the mesh was built from.
    pub dims: [usize; 3],
    /// Voxel side length in meters.
    pub l: f64,
    /// Grid coordinates (x, y, z) per cell, in cell order.
    pub cells: Vec<[usize; 3]>,
    /// Face-adjacent neighbor cell indices, `None` where the face is open.
    /// Order: -x, +x, -y, +y, -z, +z.
    pub neighbors: Vec<[Option<usize>; 6]>,
    /// Indices of cells with an exposed top face.
    pub surface_set: Vec<usize>,
    /// Contact area with the substrate per cell (m^2).
    pub substrate_areas: Vec<f64>,
    /// Contact area with the atmosphere per cell (m^2).
    pub ambient_areas: Vec<f64>,
    /// Cell centroid positions in meters.
    pub coords: Vec<[f64; 3]>,
}

impl Mesh {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_surface(&self) -> usize {
        self.surface_set.len()
    }
}

/// Builds the mesh from an occupancy grid with voxel side length `l`.
///
/// Rejects empty occupancy, parts that do not rest on the substrate plane,
/// and occupancies whose occupied voxels are not face-connected (heat could
/// not flow between the components).
pub fn build_mesh(mask: &OccupancyGrid, l: f64) -> Result<Mesh> {
    if l <= 0.0 || !l.is_finite() {
        return Err(Error::invalid(format!("voxel side length must be positive, got {l}")));
    }
    let (nx, ny, nz) = (mask.nx, mask.ny, mask.nz);
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::Mesh("occupancy grid has a zero extent".into()));
    }

    // Lexicographic (z, y, x) cell ordering.
    let mut cells = Vec::new();
    let mut cell_of = vec![usize::MAX; nx * ny * nz];
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                if mask.get(x, y, z) {
                    cell_of[mask.idx(x, y, z)] = cells.len();
                    cells.push([x, y, z]);
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::Mesh("occupancy grid contains no occupied voxels".into()));
    }
    if !cells.iter().any(|c| c[2] == 0) {
        return Err(Error::Mesh(
            "part does not touch the substrate plane (no occupied voxel at z = 0)".into(),
        ));
    }

    let n = cells.len();
    let face_area = l * l;
    let mut neighbors = vec![[None; 6]; n];
    let mut substrate_areas = vec![0.0; n];
    let mut ambient_areas = vec![0.0; n];
    let mut surface_set = Vec::new();
    let mut coords = Vec::with_capacity(n);

    // Face order: -x, +x, -y, +y, -z, +z.
    const OFFS: [[isize; 3]; 6] = [
        [-1, 0, 0],
        [1, 0, 0],
        [0, -1, 0],
        [0, 1, 0],
        [0, 0, -1],
        [0, 0, 1],
    ];

    for (ci, &[x, y, z]) in cells.iter().enumerate() {
        coords.push([
            (x as f64 + 0.5) * l,
            (y as f64 + 0.5) * l,
            (z as f64 + 0.5) * l,
        ]);
        for (f, off) in OFFS.iter().enumerate() {
            let xx = x as isize + off[0];
            let yy = y as isize + off[1];
            let zz = z as isize + off[2];
            let inside = xx >= 0
                && yy >= 0
                && zz >= 0
                && (xx as usize) < nx
                && (yy as usize) < ny
                && (zz as usize) < nz;
            let nb = if inside {
                let j = cell_of[mask.idx(xx as usize, yy as usize, zz as usize)];
                (j != usize::MAX).then_some(j)
            } else {
                None
            };
            neighbors[ci][f] = nb;
            if nb.is_none() {
                if f == 4 && z == 0 {
                    // Bottom face on the substrate plane.
                    substrate_areas[ci] += face_area;
                } else {
                    ambient_areas[ci] += face_area;
                    if f == 5 {
                        surface_set.push(ci);
                    }
                }
            }
        }
    }

    // Connectivity check: flood fill over face adjacency.
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for nb in neighbors[i].iter().flatten() {
            if !seen[*nb] {
                seen[*nb] = true;
                count += 1;
                stack.push(*nb);
            }
        }
    }
    if count != n {
        return Err(Error::Mesh(format!(
            "occupancy is disconnected: {count} of {n} voxels reachable from the first"
        )));
    }

    Ok(Mesh {
        dims: [nx, ny, nz],
        l,
        cells,
        neighbors,
        surface_set,
        substrate_areas,
        ambient_areas,
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_voxel() {
        let mesh = build_mesh(&OccupancyGrid::full(1, 1, 1), 0.7e-3).unwrap();
        assert_eq!(mesh.n_cells(), 1);
        let a = 0.7e-3f64 * 0.7e-3;
        assert!((mesh.substrate_areas[0] - a).abs() < 1e-18);
        assert!((mesh.ambient_areas[0] - 5.0 * a).abs() < 1e-18);
        assert_eq!(mesh.surface_set, vec![0]);
    }

    #[test]
    fn stacked_pair() {
        let mesh = build_mesh(&OccupancyGrid::full(1, 1, 2), 1e-3).unwrap();
        assert_eq!(mesh.n_cells(), 2);
        // Bottom cell is index 0 under (z, y, x) ordering.
        assert_eq!(mesh.neighbors[0][5], Some(1));
        assert_eq!(mesh.neighbors[1][4], Some(0));
        let a = 1e-6;
        assert!((mesh.substrate_areas[0] - a).abs() < 1e-18);
        assert_eq!(mesh.substrate_areas[1], 0.0);
        assert_eq!(mesh.surface_set, vec![1]);
        // Bottom: 4 side faces; top: 4 sides + top.
        assert!((mesh.ambient_areas[0] - 4.0 * a).abs() < 1e-18);
        assert!((mesh.ambient_areas[1] - 5.0 * a).abs() < 1e-18);
    }

    #[test]
    fn block_counts_by_enumeration() {
        let (nx, ny, nz) = (32, 38, 3);
        let mesh = build_mesh(&OccupancyGrid::full(nx, ny, nz), 0.7e-3).unwrap();
        // Oracle: direct enumeration over the full block.
        assert_eq!(mesh.n_cells(), nx * ny * nz);
        assert_eq!(mesh.n_surface(), nx * ny);
        // Every surface cell sits in the top layer of a full block.
        assert!(mesh.surface_set.iter().all(|&i| mesh.cells[i][2] == nz - 1));
        // Adjacency symmetric with 0..6 neighbors.
        for (i, nbs) in mesh.neighbors.iter().enumerate() {
            for nb in nbs.iter().flatten() {
                assert!(mesh.neighbors[*nb].iter().flatten().any(|&b| b == i));
            }
        }
    }

    #[test]
    fn rejects_empty_and_floating_and_disconnected() {
        assert!(build_mesh(&OccupancyGrid::empty(2, 2, 2), 1e-3).is_err());

        let mut floating = OccupancyGrid::empty(1, 1, 3);
        floating.set(0, 0, 1);
        assert!(build_mesh(&floating, 1e-3).is_err());

        let mut split = OccupancyGrid::empty(3, 1, 1);
        split.set(0, 0, 0);
        split.set(2, 0, 0);
        assert!(build_mesh(&split, 1e-3).is_err());
    }

    #[test]
    fn l_shape_overhang_surface() {
        // Two columns, one taller; the short column's top face is exposed.
        let mut g = OccupancyGrid::empty(2, 1, 2);
        g.set(0, 0, 0);
        g.set(1, 0, 0);
        g.set(0, 0, 1);
        let mesh = build_mesh(&g, 1e-3).unwrap();
        assert_eq!(mesh.n_cells(), 3);
        // Cells ordered: (0,0,0), (1,0,0), (0,0,1). Exposed tops: cell 1 and cell 2.
        assert_eq!(mesh.surface_set, vec![1, 2]);
    }
}
