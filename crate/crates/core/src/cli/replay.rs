//! Replay logs: one JSON header line, then length-prefixed binary tick records.
//!
//! Record payload (little endian): `u64 tick`, `u32 n_actions`, per action
//! `i64 agent` + four `i64` action words, `u32 n_events`, per event 13 `i64`
//! cells, then `u64 state digest` after the tick.

use std::io::{BufRead, BufReader, Read, Write};

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::datastore::EventRecord;
use crate::env::ACTION_WIDTH;
use crate::error::{Error, Result};
use crate::tasks::TaskSpec;
use crate::types::EntityId;
use crate::worldgen::TileMap;

pub const REPLAY_FORMAT: &str = "gridmmo-replay";
pub const REPLAY_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayHeader {
    pub format: String,
    pub version: u32,
    pub engine: String,
    pub seed: u64,
    pub config: Config,
    /// Hex digest of `config`, checked on load.
    pub config_digest: String,
    /// Base64 of the exported tile map.
    pub map: String,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

impl ReplayHeader {
    pub fn new(seed: u64, config: &Config, map: &TileMap, tasks: &[TaskSpec]) -> Self {
        Self {
            format: REPLAY_FORMAT.into(),
            version: REPLAY_VERSION,
            engine: env!("CARGO_PKG_VERSION").into(),
            seed,
            config: config.clone(),
            config_digest: format!("{:016x}", config.digest()),
            map: STANDARD.encode(map.to_bytes()),
            tasks: tasks.to_vec(),
        }
    }

    pub fn tile_map(&self) -> Result<TileMap> {
        let bytes = STANDARD
            .decode(&self.map)
            .map_err(|e| Error::Format(format!("map: {e}")))?;
        TileMap::from_bytes(&bytes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TickRecord {
    pub tick: u64,
    pub actions: Vec<(EntityId, [i64; ACTION_WIDTH])>,
    pub events: Vec<EventRecord>,
    pub digest: u64,
}

impl TickRecord {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = Vec::with_capacity(24 + self.actions.len() * 40 + self.events.len() * 104);
        b.extend(self.tick.to_le_bytes());
        b.extend((self.actions.len() as u32).to_le_bytes());
        for (id, a) in &self.actions {
            b.extend(id.to_le_bytes());
            for v in a {
                b.extend(v.to_le_bytes());
            }
        }
        b.extend((self.events.len() as u32).to_le_bytes());
        for e in &self.events {
            for v in e.to_cells() {
                b.extend(v.to_le_bytes());
            }
        }
        b.extend(self.digest.to_le_bytes());
        b
    }

    pub fn from_bytes(b: &[u8]) -> Result<Self> {
        let mut cur = Cursor { b, at: 0 };
        let tick = cur.u64()?;
        let n = cur.u32()? as usize;
        let mut actions = Vec::with_capacity(n.min(1 << 16));
        for _ in 0..n {
            let id = cur.i64()?;
            let mut a = [0; ACTION_WIDTH];
            for v in &mut a {
                *v = cur.i64()?;
            }
            actions.push((id, a));
        }
        let n = cur.u32()? as usize;
        let mut events = Vec::with_capacity(n.min(1 << 16));
        for _ in 0..n {
            let mut cells = [0; 13];
            for v in &mut cells {
                *v = cur.i64()?;
            }
            events.push(EventRecord::from_cells(&cells));
        }
        let digest = cur.u64()?;
        if cur.at != b.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes in tick record",
                b.len() - cur.at
            )));
        }
        Ok(Self {
            tick,
            actions,
            events,
            digest,
        })
    }
}

struct Cursor<'a> {
    b: &'a [u8],
    at: usize,
}

impl Cursor<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let s = self
            .b
            .get(self.at..self.at + N)
            .ok_or_else(|| Error::Format("tick record truncated".into()))?;
        self.at += N;
        Ok(s.try_into().unwrap())
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take()?))
    }
}

pub struct ReplayWriter<W: Write> {
    out: W,
}

impl<W: Write> ReplayWriter<W> {
    pub fn new(mut out: W, header: &ReplayHeader) -> Result<Self> {
        let line = serde_json::to_string(header).expect("header serializes");
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
        Ok(Self { out })
    }

    pub fn write(&mut self, rec: &TickRecord) -> Result<()> {
        let payload = rec.to_bytes();
        self.out.write_all(&(payload.len() as u32).to_le_bytes())?;
        self.out.write_all(&payload)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayLog {
    pub header: ReplayHeader,
    pub records: Vec<TickRecord>,
}

impl ReplayLog {
    pub fn read(input: impl Read) -> Result<Self> {
        let mut r = BufReader::new(input);
        let mut line = Vec::new();
        r.read_until(b'\n', &mut line)?;
        if line.last() != Some(&b'\n') {
            return Err(Error::Format("replay header line is truncated".into()));
        }
        let header: ReplayHeader = serde_json::from_slice(&line[..line.len() - 1])
            .map_err(|e| Error::Format(format!("replay header: {e}")))?;
        if header.format != REPLAY_FORMAT || header.version != REPLAY_VERSION {
            return Err(Error::Format(format!(
                "unsupported replay {} v{}",
                header.format, header.version
            )));
        }
        if header.config_digest != format!("{:016x}", header.config.digest()) {
            return Err(Error::Format(
                "config digest does not match header config".into(),
            ));
        }
        let mut records = Vec::new();
        loop {
            let mut len = [0u8; 4];
            match r.read(&mut len[..1])? {
                0 => break,
                _ => r
                    .read_exact(&mut len[1..])
                    .map_err(|_| Error::Format("record length truncated".into()))?,
            }
            let mut payload = vec![0u8; u32::from_le_bytes(len) as usize];
            r.read_exact(&mut payload)
                .map_err(|_| Error::Format(format!("record {} truncated", records.len())))?;
            records.push(TickRecord::from_bytes(&payload)?);
        }
        Ok(Self { header, records })
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::read(std::fs::File::open(path)?)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = ReplayWriter::new(Vec::new(), &self.header).expect("vec write");
        for rec in &self.records {
            w.write(rec).expect("vec write");
        }
        w.finish().expect("vec write")
    }
}
