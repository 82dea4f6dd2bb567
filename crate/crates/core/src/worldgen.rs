//! Procedural tile maps.
//!
//! Two 3-octave value-noise fields (elevation, moisture) are thresholded by
//! quantile so terrain shares are exact: lowest elevation becomes water,
//! highest becomes stone, the wettest remaining land becomes forest. Herb,
//! ore, tree and crystal are scattered over grass and fish over shoreline
//! water by seeded hash ranking. The outer `border` ring is void and the ring
//! just inside it is forced to grass so agents can spawn there.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::datastore::digest::Fnv64;
use crate::error::{Error, Result};
use crate::rng::{key, unit, STREAM_MAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Material {
    Void = 0,
    Water = 1,
    Grass = 2,
    Stone = 3,
    Forest = 4,
    Herb = 5,
    Fish = 6,
    Ore = 7,
    Tree = 8,
    Crystal = 9,
}

impl Material {
    pub const ALL: [Material; 10] = [
        Material::Void,
        Material::Water,
        Material::Grass,
        Material::Stone,
        Material::Forest,
        Material::Herb,
        Material::Fish,
        Material::Ore,
        Material::Tree,
        Material::Crystal,
    ];

    pub fn from_u8(b: u8) -> Option<Self> {
        Self::ALL.get(b as usize).copied()
    }

    pub fn is_passable(self) -> bool {
        matches!(
            self,
            Material::Grass
                | Material::Forest
                | Material::Herb
                | Material::Ore
                | Material::Tree
                | Material::Crystal
        )
    }

    /// Tiles that deplete when harvested and later respawn.
    pub fn is_resource(self) -> bool {
        matches!(
            self,
            Material::Forest
                | Material::Herb
                | Material::Fish
                | Material::Ore
                | Material::Tree
                | Material::Crystal
        )
    }
}

/// Terrain shares used by the generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerrainParams {
    pub border: usize,
    pub water_fraction: f64,
    pub stone_fraction: f64,
    pub forest_fraction: f64,
    pub resource_density: f64,
}

impl Default for TerrainParams {
    fn default() -> Self {
        let c = Config::default();
        Self::from(&c)
    }
}

impl From<&Config> for TerrainParams {
    fn from(c: &Config) -> Self {
        Self {
            border: c.border,
            water_fraction: c.water_fraction,
            stone_fraction: c.stone_fraction,
            forest_fraction: c.forest_fraction,
            resource_density: c.resource_density,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileMap {
    size: usize,
    seed: u64,
    border: usize,
    material: Vec<Material>,
    timer: Vec<u16>,
    /// Indices with a positive timer; derived from `timer`.
    depleted: Vec<u32>,
}

/// Generate a map of side `size` with default terrain shares.
pub fn generate_map(seed: u64, size: usize) -> Result<TileMap> {
    TileMap::generate(seed, size, &TerrainParams::default())
}

// Octave lattice spacings and amplitudes.
const OCTAVES: [(f64, f64); 3] = [(32.0, 1.0), (16.0, 0.5), (8.0, 0.25)];

fn lattice(seed: u64, field: u64, octave: u64, x: i64, y: i64) -> f64 {
    unit(key(&[seed, STREAM_MAP, field, octave, x as u64, y as u64]))
}

fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

/// Layered value noise in `[0, 1]` at integer tile coordinates.
pub fn value_noise(seed: u64, field: u64, r: usize, c: usize) -> f64 {
    let mut total = 0.0;
    let mut norm = 0.0;
    for (o, &(cell, amp)) in OCTAVES.iter().enumerate() {
        let x = r as f64 / cell;
        let y = c as f64 / cell;
        let (x0, y0) = (x.floor() as i64, y.floor() as i64);
        let (fx, fy) = (smooth(x - x0 as f64), smooth(y - y0 as f64));
        let v00 = lattice(seed, field, o as u64, x0, y0);
        let v10 = lattice(seed, field, o as u64, x0 + 1, y0);
        let v01 = lattice(seed, field, o as u64, x0, y0 + 1);
        let v11 = lattice(seed, field, o as u64, x0 + 1, y0 + 1);
        let top = v00 + (v10 - v00) * fx;
        let bot = v01 + (v11 - v01) * fx;
        total += amp * (top + (bot - top) * fy);
        norm += amp;
    }
    total / norm
}

/// Indices of `candidates` ordered by `score`, ties by index.
fn rank_by(mut candidates: Vec<usize>, score: impl Fn(usize) -> f64) -> Vec<usize> {
    candidates.sort_by(|&a, &b| score(a).total_cmp(&score(b)).then(a.cmp(&b)));
    candidates
}

impl TileMap {
    pub fn generate(seed: u64, size: usize, p: &TerrainParams) -> Result<Self> {
        if size < 32 {
            return Err(Error::Config(format!("map size {size} below minimum 32")));
        }
        if p.border == 0 || 2 * p.border + 3 > size {
            return Err(Error::Config(format!(
                "border {} does not fit size {size}",
                p.border
            )));
        }
        let b = p.border;
        let n = size * size;
        let mut material = vec![Material::Void; n];
        let idx = |r: usize, c: usize| r * size + c;
        let interior: Vec<usize> = (b..size - b)
            .flat_map(|r| (b..size - b).map(move |c| r * size + c))
            .collect();
        let count = |f: f64| (f * interior.len() as f64).round() as usize;

        let elevation = |i: usize| value_noise(seed, 0, i / size, i % size);
        let moisture = |i: usize| value_noise(seed, 1, i / size, i % size);

        let by_elev = rank_by(interior.clone(), elevation);
        let n_water = count(p.water_fraction);
        let n_stone = count(p.stone_fraction);
        for (k, &i) in by_elev.iter().enumerate() {
            material[i] = if k < n_water {
                Material::Water
            } else if k >= by_elev.len() - n_stone {
                Material::Stone
            } else {
                Material::Grass
            };
        }
        let land: Vec<usize> = interior
            .iter()
            .copied()
            .filter(|&i| material[i] == Material::Grass)
            .collect();
        let n_forest = count(p.forest_fraction).min(land.len());
        for &i in rank_by(land, |i| -moisture(i)).iter().take(n_forest) {
            material[i] = Material::Forest;
        }

        // Spawn ring.
        let (lo, hi) = (b, size - b - 1);
        let on_ring = |r: usize, c: usize| {
            (r == lo || r == hi) && (lo..=hi).contains(&c)
                || (c == lo || c == hi) && (lo..=hi).contains(&r)
        };
        for r in lo..=hi {
            for c in lo..=hi {
                if on_ring(r, c) {
                    material[idx(r, c)] = Material::Grass;
                }
            }
        }

        let passable = material.iter().filter(|m| m.is_passable()).count();
        let target = (p.resource_density * passable as f64).round() as usize;
        for (tag, res) in [
            (10, Material::Herb),
            (11, Material::Ore),
            (12, Material::Tree),
            (13, Material::Crystal),
        ] {
            let grass: Vec<usize> = interior
                .iter()
                .copied()
                .filter(|&i| material[i] == Material::Grass && !on_ring(i / size, i % size))
                .collect();
            let ranked = rank_by(grass, |i| unit(key(&[seed, STREAM_MAP, tag, i as u64])));
            for &i in ranked.iter().take(target) {
                material[i] = res;
            }
        }
        let shore: Vec<usize> = interior
            .iter()
            .copied()
            .filter(|&i| {
                material[i] == Material::Water && {
                    let (r, c) = (i / size, i % size);
                    [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
                        .iter()
                        .any(|&(rr, cc)| material[idx(rr, cc)].is_passable())
                }
            })
            .collect();
        let ranked = rank_by(shore, |i| unit(key(&[seed, STREAM_MAP, 14, i as u64])));
        for &i in ranked.iter().take(target) {
            material[i] = Material::Fish;
        }

        Ok(Self {
            size,
            seed,
            border: b,
            material,
            timer: vec![0; n],
            depleted: Vec::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn border(&self) -> usize {
        self.border
    }

    #[inline]
    pub fn in_bounds(&self, r: i64, c: i64) -> bool {
        r >= 0 && c >= 0 && (r as usize) < self.size && (c as usize) < self.size
    }

    #[inline]
    fn index(&self, r: i64, c: i64) -> usize {
        r as usize * self.size + c as usize
    }

    /// Material at `(r, c)`; out-of-bounds reads as void.
    #[inline]
    pub fn material(&self, r: i64, c: i64) -> Material {
        if self.in_bounds(r, c) {
            self.material[self.index(r, c)]
        } else {
            Material::Void
        }
    }

    #[inline]
    pub fn passable(&self, r: i64, c: i64) -> bool {
        self.material(r, c).is_passable()
    }

    pub fn timer(&self, r: i64, c: i64) -> u16 {
        if self.in_bounds(r, c) {
            self.timer[self.index(r, c)]
        } else {
            0
        }
    }

    /// A resource tile whose timer is zero.
    pub fn is_available(&self, r: i64, c: i64) -> bool {
        self.material(r, c).is_resource() && self.timer(r, c) == 0
    }

    /// Mark a resource tile harvested for `delay` ticks.
    pub fn deplete(&mut self, r: i64, c: i64, delay: u16) -> Result<()> {
        if !self.is_available(r, c) {
            return Err(Error::Logic(format!(
                "tile ({r}, {c}) has no available resource"
            )));
        }
        if delay == 0 {
            return Ok(());
        }
        let i = self.index(r, c);
        self.timer[i] = delay;
        self.depleted.push(i as u32);
        Ok(())
    }

    /// Count every positive timer down by one; zero restores the resource.
    pub fn respawn_tick(&mut self) {
        let timer = &mut self.timer;
        self.depleted.retain(|&i| {
            let t = &mut timer[i as usize];
            *t -= 1;
            *t > 0
        });
    }

    pub fn spawn_ring(&self) -> Vec<(i64, i64)> {
        let lo = self.border as i64;
        let hi = (self.size - self.border - 1) as i64;
        let mut ring = Vec::with_capacity(4 * (hi - lo) as usize);
        for c in lo..hi {
            ring.push((lo, c));
        }
        for r in lo..hi {
            ring.push((r, hi));
        }
        for c in (lo + 1..=hi).rev() {
            ring.push((hi, c));
        }
        for r in (lo + 1..=hi).rev() {
            ring.push((r, lo));
        }
        ring
    }

    /// `(r, c)` of the map centre.
    pub fn center(&self) -> (i64, i64) {
        ((self.size / 2) as i64, (self.size / 2) as i64)
    }

    pub fn passable_fraction(&self) -> f64 {
        self.material.iter().filter(|m| m.is_passable()).count() as f64 / self.material.len() as f64
    }

    pub fn count(&self, m: Material) -> usize {
        self.material.iter().filter(|&&x| x == m).count()
    }

    pub fn materials(&self) -> &[Material] {
        &self.material
    }

    /// Positions reachable from the centre through passable tiles.
    pub fn reachable_from_center(&self) -> Vec<bool> {
        let mut seen = vec![false; self.material.len()];
        let mut start = self.center();
        if !self.passable(start.0, start.1) {
            // nearest passable tile in scan order
            match self.material.iter().position(|m| m.is_passable()) {
                Some(i) => start = ((i / self.size) as i64, (i % self.size) as i64),
                None => return seen,
            }
        }
        let mut q = VecDeque::from([start]);
        seen[self.index(start.0, start.1)] = true;
        while let Some((r, c)) = q.pop_front() {
            for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                let (nr, nc) = (r + dr, c + dc);
                if self.passable(nr, nc) && !seen[self.index(nr, nc)] {
                    seen[self.index(nr, nc)] = true;
                    q.push_back((nr, nc));
                }
            }
        }
        seen
    }

    pub(crate) fn digest_into(&self, h: &mut Fnv64) {
        h.write_u64(self.size as u64);
        let bytes: Vec<u8> = self.material.iter().map(|&m| m as u8).collect();
        h.write_bytes(&bytes);
        for &i in &self.depleted {
            h.write_u64(i as u64);
            h.write_u64(self.timer[i as usize] as u64);
        }
    }

    const HEADER_LEN: usize = 4 + 8;

    /// Flat binary export: `size: u32 LE`, `seed: u64 LE`, then per tile a
    /// material byte followed by the depletion timer as `u16 LE`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::HEADER_LEN + 3 * self.material.len());
        out.extend_from_slice(&(self.size as u32).to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        for (m, t) in self.material.iter().zip(&self.timer) {
            out.push(*m as u8);
            out.extend_from_slice(&t.to_le_bytes());
        }
        out
    }

    /// Inverse of [`Self::to_bytes`]. The border width is recovered from the
    /// void ring.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < Self::HEADER_LEN {
            return Err(Error::Format("map header truncated".into()));
        }
        let size = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
        let seed = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
        let n = size
            .checked_mul(size)
            .ok_or_else(|| Error::Format("map size overflows".into()))?;
        let body = &bytes[Self::HEADER_LEN..];
        if body.len() != 3 * n {
            return Err(Error::Format(format!(
                "map body has {} bytes, expected {}",
                body.len(),
                3 * n
            )));
        }
        let mut material = Vec::with_capacity(n);
        let mut timer = Vec::with_capacity(n);
        let mut depleted = Vec::new();
        for (i, cell) in body.chunks_exact(3).enumerate() {
            let m = Material::from_u8(cell[0])
                .ok_or_else(|| Error::Format(format!("bad material byte {}", cell[0])))?;
            let t = u16::from_le_bytes([cell[1], cell[2]]);
            if t > 0 {
                if !m.is_resource() {
                    return Err(Error::Format(format!("timer on non-resource tile {i}")));
                }
                depleted.push(i as u32);
            }
            material.push(m);
            timer.push(t);
        }
        let border = (0..size / 2)
            .take_while(|&k| material[k * size + k] == Material::Void)
            .count();
        Ok(Self {
            size,
            seed,
            border,
            material,
            timer,
            depleted,
        })
    }
}
