use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// Binary event label: signal is +1, background is −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Tag {
    Signal,
    Background,
}

impl Tag {
    pub fn sign(self) -> f64 {
        match self {
            Tag::Signal => 1.0,
            Tag::Background => -1.0,
        }
    }

    pub fn flipped(self) -> Tag {
        match self {
            Tag::Signal => Tag::Background,
            Tag::Background => Tag::Signal,
        }
    }
}

impl From<Tag> for i8 {
    fn from(t: Tag) -> i8 {
        match t {
            Tag::Signal => 1,
            Tag::Background => -1,
        }
    }
}

impl TryFrom<i8> for Tag {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(Tag::Signal),
            -1 => Ok(Tag::Background),
            other => Err(format!("tag must be +1 or -1, got {other}")),
        }
    }
}

/// Physics origin of an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    Signal,
    Wjets,
    Ttbar,
    Other,
}

impl Process {
    pub const ALL: [Process; 4] = [Process::Signal, Process::Wjets, Process::Ttbar, Process::Other];

    pub fn as_str(self) -> &'static str {
        match self {
            Process::Signal => "signal",
            Process::Wjets => "wjets",
            Process::Ttbar => "ttbar",
            Process::Other => "other",
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Process {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "signal" => Ok(Process::Signal),
            "wjets" | "w+jets" => Ok(Process::Wjets),
            "ttbar" => Ok(Process::Ttbar),
            "other" => Ok(Process::Other),
            other => Err(format!("unknown process `{other}`")),
        }
    }
}

/// One weighted, tagged event. `values` are aligned with the owning
/// [`Dataset`]'s schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub values: Vec<f64>,
    pub tag: Tag,
    pub weight: f64,
    pub process: Process,
}

impl Event {
    pub fn new(values: Vec<f64>, tag: Tag, weight: f64, process: Process) -> Self {
        Event { values, tag, weight, process }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema: Vec<String>,
    pub events: Vec<Event>,
}

impl Dataset {
    pub fn new(schema: Vec<String>) -> Self {
        Dataset { schema, events: Vec::new() }
    }

    /// Builds a dataset, checking every event against the schema.
    pub fn from_events(schema: Vec<String>, events: Vec<Event>) -> Result<Self> {
        let mut d = Dataset::new(schema);
        for e in events {
            d.push(e)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, event: Event) -> Result<()> {
        if event.values.len() != self.schema.len() {
            return Err(Error::Dimension { expected: self.schema.len(), got: event.values.len() });
        }
        if !(event.weight >= 0.0) || !event.weight.is_finite() {
            return Err(Error::input(format!("event weight must be finite and non-negative, got {}", event.weight)));
        }
        if let Some(k) = event.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!("non-finite value for `{}`", self.schema[k])));
        }
        self.events.push(event);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|s| s == name)
    }

    pub fn require_column(&self, name: &str) -> Result<usize> {
        self.column(name).ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    /// Column indices for `names`, in the given order.
    pub fn columns(&self, names: &[String]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.require_column(n)).collect()
    }

    /// New dataset restricted to `names` (in that order).
    pub fn select(&self, names: &[String]) -> Result<Dataset> {
        let idx = self.columns(names)?;
        let events = self
            .events
            .iter()
            .map(|e| Event { values: idx.iter().map(|&k| e.values[k]).collect(), ..e.clone() })
            .collect();
        Ok(Dataset { schema: names.to_vec(), events })
    }

    /// New dataset holding the events at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset { schema: self.schema.clone(), events: indices.iter().map(|&i| self.events[i].clone()).collect() }
    }

    pub fn filter<F: Fn(&Event) -> bool>(&self, keep: F) -> Dataset {
        Dataset { schema: self.schema.clone(), events: self.events.iter().filter(|e| keep(e)).cloned().collect() }
    }

    pub fn count(&self, tag: Tag) -> usize {
        self.events.iter().filter(|e| e.tag == tag).count()
    }

    pub fn weight_sum(&self, tag: Tag) -> f64 {
        compensated_sum(self.events.iter().filter(|e| e.tag == tag).map(|e| e.weight))
    }

    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.events.iter().map(|e| e.weight))
    }
}
