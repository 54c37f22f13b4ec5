use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Edge length of a terrain block.
pub const BLOCK_SIZE: f64 = 0.10;
/// Default maximum block height of uneven terrain.
pub const DEFAULT_BLOCK_HEIGHT: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TerrainKind {
    Flat,
    Blocks,
}

/// Height field over a rectangular grid of square blocks. Queries outside
/// the grid return height 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Terrain {
    pub kind: TerrainKind,
    pub block_size: f64,
    pub origin: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    /// Row-major `ny × nx`; row `iy` covers `origin[1] + iy * block_size`.
    pub heights: Vec<f64>,
    pub h_max: f64,
    pub seed: u64,
}

/// Grid extent used by [`make_terrain`]: x in [-2, 10), y in [-4, 4).
const GRID_ORIGIN: [f64; 2] = [-2.0, -4.0];
const GRID_NX: usize = 120;
const GRID_NY: usize = 80;

impl Terrain {
    pub fn flat() -> Self {
        Self {
            kind: TerrainKind::Flat,
            block_size: BLOCK_SIZE,
            origin: GRID_ORIGIN,
            nx: 0,
            ny: 0,
            heights: Vec::new(),
            h_max: 0.0,
            seed: 0,
        }
    }

    pub fn height_at(&self, x: f64, y: f64) -> f64 {
        if self.heights.is_empty() {
            return 0.0;
        }
        let fx = ((x - self.origin[0]) / self.block_size).floor();
        let fy = ((y - self.origin[1]) / self.block_size).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.nx as f64 || fy >= self.ny as f64 {
            return 0.0;
        }
        self.heights[fy as usize * self.nx + fx as usize]
    }

    pub fn describe(&self) -> String {
        match self.kind {
            TerrainKind::Flat => "flat".to_string(),
            TerrainKind::Blocks => format!("blocks(h_max={}, seed={})", self.h_max, self.seed),
        }
    }

    /// CSV grid: a header line `block_size,origin_x,origin_y,nx,ny`, its
    /// values, then `ny` rows of `nx` heights.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("block_size,origin_x,origin_y,nx,ny\n");
        let _ = writeln!(s, "{},{},{},{},{}", self.block_size, self.origin[0], self.origin[1], self.nx, self.ny);
        for row in self.heights.chunks(self.nx.max(1)) {
            let line: Vec<String> = row.iter().map(f64::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Input(format!("terrain csv: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        if header.trim() != "block_size,origin_x,origin_y,nx,ny" {
            return Err(bad("unexpected header"));
        }
        let meta: Vec<&str> = lines.next().ok_or_else(|| bad("missing grid metadata"))?.split(',').collect();
        if meta.len() != 5 {
            return Err(bad("grid metadata needs 5 fields"));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("bad number {s:?}")));
        let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(&format!("bad count {s:?}")));
        let block_size = num(meta[0])?;
        if block_size <= 0.0 {
            return Err(bad("block_size must be positive"));
        }
        let origin = [num(meta[1])?, num(meta[2])?];
        let (nx, ny) = (int(meta[3])?, int(meta[4])?);
        let mut heights = Vec::with_capacity(nx * ny);
        for line in lines {
            let row: Vec<f64> = line.split(',').map(num).collect::<Result<_>>()?;
            if row.len() != nx {
                return Err(bad(&format!("row has {} cells, expected {nx}", row.len())));
            }
            heights.extend(row);
        }
        if heights.len() != nx * ny {
            return Err(bad(&format!("expected {ny} rows")));
        }
        let h_max = heights.iter().copied().fold(0.0, f64::max);
        let kind = if heights.iter().all(|h| *h == 0.0) { TerrainKind::Flat } else { TerrainKind::Blocks };
        Ok(Self { kind, block_size, origin, nx, ny, heights, h_max, seed: 0 })
    }
}

/// Builds a terrain. Blocks get i.i.d. heights uniform in `[0, h_max]`.
pub fn make_terrain(kind: TerrainKind, h_max: f64, seed: u64) -> Result<Terrain> {
    if !(h_max >= 0.0) || !h_max.is_finite() {
        return Err(Error::Config(format!("terrain h_max must be a finite value >= 0, got {h_max}")));
    }
    match kind {
        TerrainKind::Flat => Ok(Terrain::flat()),
        TerrainKind::Blocks => {
            let mut rng = rng_from_seed(seed);
            let heights = (0..GRID_NX * GRID_NY).map(|_| h_max * rng.random::<f64>()).collect();
            Ok(Terrain {
                kind,
                block_size: BLOCK_SIZE,
                origin: GRID_ORIGIN,
                nx: GRID_NX,
                ny: GRID_NY,
                heights,
                h_max,
                seed,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_is_zero() {
        let t = make_terrain(TerrainKind::Flat, 0.3, 1).unwrap();
        for (x, y) in [(0.0, 0.0), (3.7, -1.2), (-100.0, 55.0)] {
            assert_eq!(t.height_at(x, y), 0.0);
        }
    }

    #[test]
    fn zero_height_blocks_are_flat() {
        let t = make_terrain(TerrainKind::Blocks, 0.0, 9).unwrap();
        assert!(t.heights.iter().all(|h| *h == 0.0));
        assert_eq!(t.height_at(0.35, 0.12), 0.0);
    }

    #[test]
    fn blocks_seeded_and_bounded() {
        let a = make_terrain(TerrainKind::Blocks, 0.04, 5).unwrap();
        assert_eq!(a, make_terrain(TerrainKind::Blocks, 0.04, 5).unwrap());
        assert_ne!(a.heights, make_terrain(TerrainKind::Blocks, 0.04, 6).unwrap().heights);
        assert!(a.heights.iter().all(|h| (0.0..=0.04).contains(h)));
        // Same block, same height.
        assert_eq!(a.height_at(0.01, 0.01), a.height_at(0.09, 0.09));
        assert!(make_terrain(TerrainKind::Blocks, -0.1, 0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let a = make_terrain(TerrainKind::Blocks, 0.04, 2).unwrap();
        let b = Terrain::from_csv(&a.to_csv()).unwrap();
        assert_eq!(a.heights, b.heights);
        assert_eq!((a.nx, a.ny, a.origin, a.block_size), (b.nx, b.ny, b.origin, b.block_size));
        assert!(Terrain::from_csv("nope\n").is_err());
    }
}
