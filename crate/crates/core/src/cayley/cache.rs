//! JSON persistence for balls, keyed by presentation digest and radius.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ball::{key_hash, Bucket};
use super::{build_ball, Ball, Budget};
use crate::error::{Error, Result};
use crate::words::{GroupOracle, Presentation, Word};

#[derive(Serialize, Deserialize)]
struct BallFile {
    label: String,
    symbols: Vec<String>,
    radius: usize,
    sphere_start: Vec<usize>,
    words: Vec<Word>,
    neighbors: Vec<u32>,
}

/// Cache file name for a presentation digest and radius.
pub fn cache_file_name(label: &str, radius: usize) -> String {
    let short: String = label.chars().filter(|c| c.is_ascii_alphanumeric()).take(16).collect();
    format!("ball-{short}-r{radius}.json")
}

impl Ball {
    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = BallFile {
            label: self.label.clone(),
            symbols: self.oracle.generators().symbols().to_vec(),
            radius: self.radius,
            sphere_start: self.sphere_start.clone(),
            words: self.words.clone(),
            neighbors: self.neighbors.clone(),
        };
        let text = serde_json::to_string(&file).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Load a cached ball; the oracle must belong to the same group (the
    /// label and generator symbols are checked).
    pub fn load_json(path: impl AsRef<Path>, oracle: Arc<dyn GroupOracle>, label: &str) -> Result<Ball> {
        let text = std::fs::read_to_string(path)?;
        let f: BallFile = serde_json::from_str(&text).map_err(|e| Error::Io(e.to_string()))?;
        if f.label != label || f.symbols != oracle.generators().symbols() {
            return Err(Error::input("cached ball belongs to a different presentation"));
        }
        let ng = f.symbols.len();
        if f.neighbors.len() != f.words.len() * ng || f.sphere_start.len() != f.radius + 2 {
            return Err(Error::input("cached ball is malformed"));
        }
        let mut index: HashMap<u64, Bucket> = HashMap::new();
        for (id, w) in f.words.iter().enumerate() {
            index
                .entry(key_hash(&oracle.key(w)))
                .and_modify(|b| b.push(id as u32))
                .or_insert(Bucket::One(id as u32));
        }
        Ok(Ball {
            oracle,
            radius: f.radius,
            words: f.words,
            sphere_start: f.sphere_start,
            neighbors: f.neighbors,
            index,
            label: f.label,
        })
    }
}

/// Load `B(1, radius)` from `dir` if cached, otherwise build and store it.
pub fn load_or_build(dir: &Path, p: &Presentation, radius: usize, budget: &Budget) -> Result<Ball> {
    let path: PathBuf = dir.join(cache_file_name(&p.digest(), radius));
    if path.exists() {
        if let Ok(b) = Ball::load_json(&path, p.oracle(), &p.digest()) {
            return Ok(b);
        }
    }
    let b = build_ball(p, radius, budget)?;
    std::fs::create_dir_all(dir)?;
    b.save_json(&path)?;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::Geometry;

    #[test]
    fn round_trip() {
        let dir = std::env::temp_dir().join(format!("relgrowth-cache-{}", std::process::id()));
        let p = Presentation::parse("gens: a b\nrel: (ab)^3").unwrap();
        let b = load_or_build(&dir, &p, 4, &Budget::unlimited()).unwrap();
        let c = load_or_build(&dir, &p, 4, &Budget::unlimited()).unwrap();
        assert_eq!(b.sphere_sizes(), c.sphere_sizes());
        assert_eq!(b.words(), c.words());
        let w = p.generators().parse_word("ababa").unwrap();
        assert_eq!(c.normal_form(&w).unwrap(), b.normal_form(&w).unwrap());
        assert!(Ball::load_json(dir.join(cache_file_name(&p.digest(), 4)), Presentation::free(2).oracle(), &Presentation::free(2).digest()).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}
