use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::environment::Environment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Event {
    /// Edge `(u, v)` resampled; `open` is its state afterwards.
    EdgeRefresh { u: usize, v: usize, open: bool },
    /// Walker rang and drew `target`; `moved` iff the edge was open.
    WalkerRing { walker: usize, target: usize, moved: bool },
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    time: f64,
    event_kind: String,
    arg1: usize,
    arg2: usize,
    arg3: u8,
}

/// Time-ordered record of every event applied to a system.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventLog {
    pub entries: Vec<(f64, Event)>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, time: f64, event: Event) {
        debug_assert!(self.entries.last().is_none_or(|(t, _)| *t < time));
        self.entries.push((time, event));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn times_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].0 < w[1].0)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for &(time, event) in &self.entries {
            let row = match event {
                Event::EdgeRefresh { u, v, open } => {
                    Row { time, event_kind: "refresh".into(), arg1: u, arg2: v, arg3: open as u8 }
                }
                Event::WalkerRing { walker, target, moved } => {
                    Row { time, event_kind: "ring".into(), arg1: walker, arg2: target, arg3: moved as u8 }
                }
            };
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
        let mut log = EventLog::new();
        for row in r.deserialize() {
            let row: Row = row?;
            let flag = match row.arg3 {
                0 => false,
                1 => true,
                x => return Err(Error::Parse(format!("arg3 must be 0 or 1, got {x}"))),
            };
            let event = match row.event_kind.as_str() {
                "refresh" => Event::EdgeRefresh { u: row.arg1, v: row.arg2, open: flag },
                "ring" => Event::WalkerRing { walker: row.arg1, target: row.arg2, moved: flag },
                other => return Err(Error::Parse(format!("unknown event kind {other:?}"))),
            };
            log.entries.push((row.time, event));
        }
        Ok(log)
    }

    /// Re-applies the log to a copy of the initial state. Fails if a recorded
    /// `moved` flag disagrees with the replayed edge state.
    pub fn replay(&self, initial: &Environment, walkers: &[usize]) -> Result<(Environment, Vec<usize>)> {
        let mut env = initial.clone();
        let mut pos = walkers.to_vec();
        for &(time, event) in &self.entries {
            match event {
                Event::EdgeRefresh { u, v, open } => {
                    if u == v || u >= env.n() || v >= env.n() {
                        return Err(Error::InvalidPair(u, v, env.n()));
                    }
                    env.set_edge(u, v, open);
                }
                Event::WalkerRing { walker, target, moved } => {
                    let from = *pos.get(walker).ok_or_else(|| Error::Parse(format!("unknown walker {walker}")))?;
                    if target == from || target >= env.n() {
                        return Err(Error::InvalidPair(from, target, env.n()));
                    }
                    if env.is_open(from, target) != moved {
                        return Err(Error::Domain(format!("replay mismatch at t = {time}")));
                    }
                    if moved {
                        pos[walker] = target;
                    }
                }
            }
            env.set_clock(time);
        }
        Ok((env, pos))
    }
}
