use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::geom::Rational;
use crate::instance::{parse_instance, parse_solution, verify_solution, Instance, IoError, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("best count must be at least 1")]
    InvalidBest,
    #[error("team count {team} is below the best count {best}")]
    InconsistentBest { best: u64, team: u64 },
}

/// `B² / T²`, or 0 when the team has no valid solution.
pub fn score_instance(best: u64, team: Option<u64>) -> Result<Rational, ScoreError> {
    if best == 0 {
        return Err(ScoreError::InvalidBest);
    }
    match team {
        None => Ok(Rational::zero()),
        Some(t) if t < best => Err(ScoreError::InconsistentBest { best, team: t }),
        Some(t) => {
            let (b, t) = (Rational::from_int(best as i64), Rational::from_int(t as i64));
            Ok(&(&b * &b) / &(&t * &t))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeamScore {
    pub name: String,
    /// Piece count of the team's best valid solution per instance.
    pub counts: BTreeMap<String, u64>,
    /// Score per instance, for every instance.
    pub scores: BTreeMap<String, Rational>,
    pub total: Rational,
}

/// A submission left out of the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Excluded {
    pub team: String,
    pub instance: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTable {
    pub instances: Vec<String>,
    /// Best valid count per instance; instances nobody solved are absent.
    pub best: BTreeMap<String, u64>,
    /// Descending total, then team name.
    pub teams: Vec<TeamScore>,
    pub excluded: Vec<Excluded>,
}

#[derive(Debug, Error)]
pub enum LeaderboardError {
    #[error("solution of team {team} refers to unknown instance {instance:?}")]
    MissingInstance { team: String, instance: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: IoError },
}

/// Scores every team's submissions. Invalid solutions count as absent.
pub fn build_leaderboard(
    instances: &[Instance],
    submissions: &BTreeMap<String, Vec<Solution>>,
) -> Result<ScoreTable, LeaderboardError> {
    let by_name: BTreeMap<&str, &Instance> = instances.iter().map(|i| (i.name.as_str(), i)).collect();
    let mut jobs = Vec::new();
    for (team, sols) in submissions {
        for sol in sols {
            let inst = by_name.get(sol.instance_name.as_str()).ok_or_else(|| LeaderboardError::MissingInstance {
                team: team.clone(),
                instance: sol.instance_name.clone(),
            })?;
            jobs.push((team, *inst, sol));
        }
    }
    let verdicts: Vec<Result<(), String>> = jobs
        .par_iter()
        .map(|(_, inst, sol)| match verify_solution(inst, sol) {
            Ok(r) if r.is_valid() => Ok(()),
            Ok(r) => Err(format!("invalid cover ({} failures)", r.failures.len())),
            Err(e) => Err(e.to_string()),
        })
        .collect();
    let mut counts: BTreeMap<&String, BTreeMap<String, u64>> =
        submissions.keys().map(|t| (t, BTreeMap::new())).collect();
    let mut excluded = Vec::new();
    for ((team, _, sol), verdict) in jobs.iter().zip(verdicts) {
        match verdict {
            Ok(()) => {
                let c = counts.get_mut(team).unwrap().entry(sol.instance_name.clone()).or_insert(u64::MAX);
                *c = (*c).min(sol.len() as u64);
            }
            Err(reason) => {
                log::warn!("excluding {team}/{}: {reason}", sol.instance_name);
                excluded.push(Excluded { team: (*team).clone(), instance: sol.instance_name.clone(), reason });
            }
        }
    }
    let mut best: BTreeMap<String, u64> = BTreeMap::new();
    for c in counts.values() {
        for (i, &k) in c {
            let b = best.entry(i.clone()).or_insert(k);
            *b = (*b).min(k);
        }
    }
    let mut names: Vec<String> = instances.iter().map(|i| i.name.clone()).collect();
    names.sort();
    let mut teams: Vec<TeamScore> = counts
        .into_iter()
        .map(|(team, c)| {
            let scores: BTreeMap<String, Rational> = names
                .iter()
                .map(|i| {
                    let s = match best.get(i) {
                        Some(&b) => score_instance(b, c.get(i).copied()).expect("best is the minimum"),
                        None => Rational::zero(),
                    };
                    (i.clone(), s)
                })
                .collect();
            let total = scores.values().sum();
            TeamScore { name: team.clone(), counts: c, scores, total }
        })
        .collect();
    teams.sort_by(|a, b| b.total.cmp(&a.total).then_with(|| a.name.cmp(&b.name)));
    Ok(ScoreTable { instances: names, best, teams, excluded })
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, LeaderboardError> {
    let io = |source| LeaderboardError::Io { path: dir.to_path_buf(), source };
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).map_err(io)? {
        let p = e.map_err(io)?.path();
        if p.is_file() && p.extension().is_some_and(|x| x == "json") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn read(path: &Path) -> Result<String, LeaderboardError> {
    std::fs::read_to_string(path).map_err(|source| LeaderboardError::Io { path: path.to_path_buf(), source })
}

/// Every `*.json` instance file of `dir`, sorted by file name.
pub fn read_instance_dir(dir: &Path) -> Result<Vec<Instance>, LeaderboardError> {
    json_files(dir)?
        .into_iter()
        .map(|p| {
            parse_instance(&read(&p)?)
                .map(|x| x.value)
                .map_err(|source| LeaderboardError::Parse { path: p, source })
        })
        .collect()
}

/// Instances from `instance_dir`; one team per subdirectory of
/// `solutions_root`, named after it. Unreadable solution files are excluded.
pub fn leaderboard_from_dirs(instance_dir: &Path, solutions_root: &Path) -> Result<ScoreTable, LeaderboardError> {
    let instances = read_instance_dir(instance_dir)?;
    let io = |source| LeaderboardError::Io { path: solutions_root.to_path_buf(), source };
    let mut teams: Vec<PathBuf> = std::fs::read_dir(solutions_root)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    teams.retain(|p| p.is_dir());
    teams.sort();
    let mut subs = BTreeMap::new();
    let mut unreadable = Vec::new();
    for dir in teams {
        let team = dir.file_name().unwrap().to_string_lossy().into_owned();
        let mut sols = Vec::new();
        for f in json_files(&dir)? {
            match parse_solution(&read(&f)?) {
                Ok(s) => sols.push(s.value),
                Err(e) => {
                    log::warn!("excluding {}: {e}", f.display());
                    unreadable.push(Excluded {
                        team: team.clone(),
                        instance: f.file_name().unwrap().to_string_lossy().into_owned(),
                        reason: e.to_string(),
                    });
                }
            }
        }
        subs.insert(team, sols);
    }
    let mut table = build_leaderboard(&instances, &subs)?;
    table.excluded.extend(unreadable);
    Ok(table)
}

impl ScoreTable {
    pub fn to_json(&self) -> serde_json::Value {
        let teams: Vec<serde_json::Value> = self
            .teams
            .iter()
            .map(|t| {
                let per: serde_json::Map<String, serde_json::Value> =
                    t.scores.iter().map(|(i, s)| (i.clone(), json!(s.to_string()))).collect();
                json!({"name": t.name, "total": t.total.to_string(), "per_instance": per})
            })
            .collect();
        json!({"teams": teams, "best": self.best})
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = self.teams.iter().map(|t| t.name.len()).max().unwrap_or(4).max(4);
        writeln!(s, "{:<4} {:<w$} {:>10} {:>6}", "rank", "team", "total", "solved").unwrap();
        for (i, t) in self.teams.iter().enumerate() {
            writeln!(s, "{:<4} {:<w$} {:>10.4} {:>6}", i + 1, t.name, t.total.to_f64(), t.counts.len()).unwrap();
        }
        for e in &self.excluded {
            writeln!(s, "excluded {}/{}: {}", e.team, e.instance, e.reason).unwrap();
        }
        s
    }
}
