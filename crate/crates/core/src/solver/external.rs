use std::io::Write;
use std::process::{Command, Stdio};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::result::{Sample, SolverResult};
use crate::error::{Error, Result};
use crate::ising::{check_spins, IsingProblem, Spin};

/// A program that reads the problem as JSON on stdin and prints
/// `{"samples":[{"spins":[..],"energy":..}]}` on stdout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalSolver {
    pub program: String,
    #[serde(default)]
    pub args: Vec<String>,
}

#[derive(Deserialize)]
struct Reply {
    samples: Vec<ReplySample>,
}

#[derive(Deserialize)]
struct ReplySample {
    spins: Vec<Spin>,
}

impl ExternalSolver {
    /// Energies in the reply are ignored and recomputed.
    pub fn solve(&self, p: &IsingProblem) -> Result<SolverResult> {
        p.validate()?;
        let start = Instant::now();
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| Error::External(format!("cannot start {}: {e}", self.program)))?;
        let payload = serde_json::to_vec(p)?;
        if let Some(mut stdin) = child.stdin.take() {
            stdin
                .write_all(&payload)
                .map_err(|e| Error::External(format!("cannot write problem: {e}")))?;
        }
        let out = child
            .wait_with_output()
            .map_err(|e| Error::External(format!("solver did not finish: {e}")))?;
        if !out.status.success() {
            return Err(Error::External(format!(
                "{} exited with {}: {}",
                self.program,
                out.status,
                String::from_utf8_lossy(&out.stderr).trim()
            )));
        }
        let reply: Reply = serde_json::from_slice(&out.stdout)
            .map_err(|e| Error::External(format!("malformed reply: {e}")))?;
        if reply.samples.is_empty() {
            return Err(Error::External("reply contains no samples".into()));
        }
        let mut samples = Vec::with_capacity(reply.samples.len());
        for s in reply.samples {
            check_spins(&s.spins, p.n)?;
            let energy = p.energy_unchecked(&s.spins);
            samples.push(Sample { spins: s.spins, energy });
        }
        SolverResult::sort(&mut samples);
        Ok(SolverResult {
            samples,
            broken_chain_fraction: 0.0,
            tie_breaks: 0,
            solver: format!("external:{}", self.program),
            elapsed_secs: start.elapsed().as_secs_f64(),
        })
    }
}
