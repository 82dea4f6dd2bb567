//! Fixed-schema columnar table with a free list.
//!
//! ```text
//! ColumnTable
//! ├── schema:  [(name, kind)]
//! ├── columns: one dense Vec per column, len == capacity
//! ├── live:    row bitmap
//! ├── gen:     per-row generation, bumped on free
//! └── free:    ordered set of dead rows (lowest reused first)
//! ```

use std::collections::BTreeSet;

use super::digest::Fnv64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Int,
    Real,
}

#[derive(Debug, Clone, PartialEq)]
enum Column {
    Int(Vec<i64>),
    Real(Vec<f64>),
}

impl Column {
    fn new(kind: CellKind) -> Self {
        match kind {
            CellKind::Int => Column::Int(Vec::new()),
            CellKind::Real => Column::Real(Vec::new()),
        }
    }

    fn resize(&mut self, n: usize) {
        match self {
            Column::Int(v) => v.resize(n, 0),
            Column::Real(v) => v.resize(n, 0.0),
        }
    }

    fn zero(&mut self, row: usize) {
        match self {
            Column::Int(v) => v[row] = 0,
            Column::Real(v) => v[row] = 0.0,
        }
    }

    #[cfg(test)]
    fn len(&self) -> usize {
        match self {
            Column::Int(v) => v.len(),
            Column::Real(v) => v.len(),
        }
    }
}

/// A row index paired with the generation it was allocated under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RowHandle {
    pub row: usize,
    pub generation: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnTable {
    names: Vec<String>,
    kinds: Vec<CellKind>,
    columns: Vec<Column>,
    live: Vec<bool>,
    generation: Vec<u32>,
    free: BTreeSet<usize>,
    live_count: usize,
}

impl ColumnTable {
    /// Create an empty table. Column names must be unique and non-empty.
    pub fn new(schema: &[(&str, CellKind)]) -> Result<Self> {
        if schema.is_empty() {
            return Err(Error::Config("table schema is empty".into()));
        }
        let mut names: Vec<String> = Vec::with_capacity(schema.len());
        for (name, _) in schema {
            if name.is_empty() {
                return Err(Error::Config("empty column name".into()));
            }
            if names.iter().any(|n| n == name) {
                return Err(Error::Config(format!("duplicate column name `{name}`")));
            }
            names.push(name.to_string());
        }
        Ok(Self {
            names,
            kinds: schema.iter().map(|(_, k)| *k).collect(),
            columns: schema.iter().map(|(_, k)| Column::new(*k)).collect(),
            live: Vec::new(),
            generation: Vec::new(),
            free: BTreeSet::new(),
            live_count: 0,
        })
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn capacity(&self) -> usize {
        self.live.len()
    }

    pub fn len(&self) -> usize {
        self.live_count
    }

    pub fn is_empty(&self) -> bool {
        self.live_count == 0
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn column_kind(&self, col: usize) -> CellKind {
        self.kinds[col]
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Query(format!("unknown column `{name}`")))
    }

    /// Allocate the lowest free row, growing capacity when none is free.
    /// The new row is zero in every column.
    pub fn alloc(&mut self) -> usize {
        if self.free.is_empty() {
            let old = self.capacity();
            let new = (old * 2).max(8);
            for c in &mut self.columns {
                c.resize(new);
            }
            self.live.resize(new, false);
            self.generation.resize(new, 0);
            self.free.extend(old..new);
        }
        let row = self.free.pop_first().expect("free list refilled");
        for c in &mut self.columns {
            c.zero(row);
        }
        self.live[row] = true;
        self.live_count += 1;
        row
    }

    pub fn handle(&self, row: usize) -> Result<RowHandle> {
        self.check_live(row)?;
        Ok(RowHandle {
            row,
            generation: self.generation[row],
        })
    }

    /// True if `handle` still names the allocation it was taken from.
    pub fn is_current(&self, handle: RowHandle) -> bool {
        self.is_live(handle.row) && self.generation[handle.row] == handle.generation
    }

    pub fn free(&mut self, row: usize) -> Result<()> {
        if !self.is_live(row) {
            return Err(Error::Logic(format!("free of dead row {row}")));
        }
        self.live[row] = false;
        self.generation[row] = self.generation[row].wrapping_add(1);
        self.free.insert(row);
        self.live_count -= 1;
        Ok(())
    }

    #[inline]
    pub fn is_live(&self, row: usize) -> bool {
        self.live.get(row).copied().unwrap_or(false)
    }

    fn check_live(&self, row: usize) -> Result<()> {
        if self.is_live(row) {
            Ok(())
        } else {
            Err(Error::Logic(format!("access to dead row {row}")))
        }
    }

    /// Live rows in ascending order.
    pub fn live_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.live
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| l.then_some(i))
    }

    #[inline]
    pub fn int(&self, row: usize, col: usize) -> i64 {
        debug_assert!(self.is_live(row), "read of dead row {row}");
        match &self.columns[col] {
            Column::Int(v) => v[row],
            Column::Real(_) => panic!("column {} is real", self.names[col]),
        }
    }

    #[inline]
    pub fn set_int(&mut self, row: usize, col: usize, value: i64) {
        debug_assert!(self.is_live(row), "write to dead row {row}");
        match &mut self.columns[col] {
            Column::Int(v) => v[row] = value,
            Column::Real(_) => panic!("column {} is real", self.names[col]),
        }
    }

    #[inline]
    pub fn add_int(&mut self, row: usize, col: usize, delta: i64) {
        let v = self.int(row, col);
        self.set_int(row, col, v + delta);
    }

    pub fn real(&self, row: usize, col: usize) -> f64 {
        debug_assert!(self.is_live(row), "read of dead row {row}");
        match &self.columns[col] {
            Column::Real(v) => v[row],
            Column::Int(_) => panic!("column {} is integer", self.names[col]),
        }
    }

    pub fn set_real(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(self.is_live(row), "write to dead row {row}");
        match &mut self.columns[col] {
            Column::Real(v) => v[row] = value,
            Column::Int(_) => panic!("column {} is integer", self.names[col]),
        }
    }

    /// Checked read for callers holding possibly stale row ids.
    pub fn try_int(&self, row: usize, col: usize) -> Result<i64> {
        self.check_live(row)?;
        if col >= self.columns.len() {
            return Err(Error::Query(format!("column index {col} out of range")));
        }
        match &self.columns[col] {
            Column::Int(v) => Ok(v[row]),
            Column::Real(_) => Err(Error::Query(format!("column {} is real", self.names[col]))),
        }
    }

    /// Raw integer column including dead rows; mask with [`Self::is_live`].
    pub fn int_column(&self, col: usize) -> &[i64] {
        match &self.columns[col] {
            Column::Int(v) => v,
            Column::Real(_) => panic!("column {} is real", self.names[col]),
        }
    }

    /// Live rows whose `column` cell is one of `values`, ascending.
    pub fn where_in(&self, column: &str, values: &[i64]) -> Result<Vec<usize>> {
        let col = self.column_index(column)?;
        if values.is_empty() {
            return Ok(Vec::new());
        }
        let out = match &self.columns[col] {
            Column::Int(v) => self
                .live_rows()
                .filter(|&r| values.contains(&v[r]))
                .collect(),
            Column::Real(v) => self
                .live_rows()
                .filter(|&r| values.iter().any(|&x| x as f64 == v[r]))
                .collect(),
        };
        Ok(out)
    }

    /// Fold every live row, in ascending row then column order, into `h`.
    pub fn digest_into(&self, h: &mut Fnv64) {
        h.write_u64(self.columns.len() as u64);
        h.write_u64(self.live_count as u64);
        for row in self.live_rows() {
            h.write_u64(row as u64);
            for c in &self.columns {
                match c {
                    Column::Int(v) => h.write_i64(v[row]),
                    Column::Real(v) => h.write_u64(v[row].to_bits()),
                }
            }
        }
    }

    pub fn digest(&self) -> u64 {
        let mut h = Fnv64::new();
        self.digest_into(&mut h);
        h.finish()
    }

    #[cfg(test)]
    pub(crate) fn columns_consistent(&self) -> bool {
        self.columns.iter().all(|c| c.len() == self.capacity())
            && self.generation.len() == self.capacity()
    }
}
