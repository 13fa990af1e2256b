//! On-disk cache of Macdonald blocks, one JSON file per degree.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

use qtsym::coeff::registry;
use qtsym::macdonald;
use qtsym::partition::Partition;
use qtsym::RatFunc;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;
const QUARANTINE: &str = "quarantine";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: u32,
    registry: Vec<String>,
    degree: usize,
    /// `λ -> μ -> coefficient of m_μ in H_λ`
    coefficients: BTreeMap<String, BTreeMap<String, String>>,
    checksum: String,
}

fn checksum(
    format: u32,
    reg: &[String],
    degree: usize,
    coeffs: &BTreeMap<String, BTreeMap<String, String>>,
) -> String {
    let body = json!({"format": format, "registry": reg, "degree": degree, "coefficients": coeffs});
    let digest = Sha256::digest(body.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Default)]
pub struct Entry {
    pub degree: usize,
    pub polynomials: usize,
    pub bytes: u64,
}

#[derive(Debug, Default)]
pub struct Stats {
    pub entries: Vec<Entry>,
    pub quarantined: usize,
}

pub struct Cache {
    dir: PathBuf,
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

impl Cache {
    pub fn new(dir: PathBuf) -> Cache {
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file(&self, n: usize) -> PathBuf {
        self.dir.join(format!("macdonald_n{n:02}.json"))
    }

    fn lock(&self, exclusive: bool) -> Result<Option<File>, CliError> {
        if !self.dir.exists() {
            if !exclusive {
                return Ok(None);
            }
            fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        }
        let path = self.dir.join(".lock");
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(|e| io_err(&path, e))?;
        if exclusive { f.lock() } else { f.lock_shared() }.map_err(|e| io_err(&path, e))?;
        Ok(Some(f))
    }

    fn degrees_on_disk(&self) -> Vec<(usize, PathBuf)> {
        let Ok(rd) = fs::read_dir(&self.dir) else {
            return Vec::new();
        };
        let mut out: Vec<(usize, PathBuf)> = rd
            .flatten()
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                let n = name
                    .strip_prefix("macdonald_n")?
                    .strip_suffix(".json")?
                    .parse()
                    .ok()?;
                Some((n, e.path()))
            })
            .collect();
        out.sort();
        out
    }

    fn read(
        path: &Path,
        n: usize,
    ) -> Result<BTreeMap<Partition, BTreeMap<Partition, RatFunc>>, String> {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if file.format != FORMAT_VERSION {
            return Err(format!("format version {}", file.format));
        }
        if file.degree != n {
            return Err(format!("degree {} in a file named for {n}", file.degree));
        }
        let session = registry::names();
        if file.registry.len() > session.len()
            || session[..file.registry.len()] != file.registry[..]
        {
            return Err("variable registry does not match this session".into());
        }
        if checksum(file.format, &file.registry, file.degree, &file.coefficients) != file.checksum {
            return Err("checksum mismatch".into());
        }
        let mut out = BTreeMap::new();
        for (l, row) in &file.coefficients {
            let l: Partition = l.parse().map_err(|e: qtsym::Error| e.to_string())?;
            let mut r = BTreeMap::new();
            for (mu, c) in row {
                let mu: Partition = mu.parse().map_err(|e: qtsym::Error| e.to_string())?;
                r.insert(mu, RatFunc::parse(c).map_err(|e| e.to_string())?);
            }
            out.insert(l, r);
        }
        Ok(out)
    }

    fn quarantine(&self, path: &Path) -> Result<(), CliError> {
        let qdir = self.dir.join(QUARANTINE);
        fs::create_dir_all(&qdir).map_err(|e| io_err(&qdir, e))?;
        let target = qdir.join(path.file_name().expect("cache file name"));
        fs::rename(path, &target).map_err(|e| io_err(path, e))
    }

    /// Installs every valid block into the in-memory cache and moves
    /// corrupt files aside. Returns the loaded degrees and warnings.
    pub fn load(&self) -> Result<(Vec<usize>, Vec<String>), CliError> {
        let _guard = self.lock(false)?;
        let mut loaded = Vec::new();
        let mut warnings = Vec::new();
        let mut bad = Vec::new();
        for (n, path) in self.degrees_on_disk() {
            match Self::read(&path, n)
                .and_then(|b| macdonald::install_block(n, &b).map_err(|e| e.to_string()))
            {
                Ok(()) => loaded.push(n),
                Err(why) => {
                    warnings.push(format!("quarantined {}: {why}", path.display()));
                    bad.push(path);
                }
            }
        }
        drop(_guard);
        if !bad.is_empty() {
            let _guard = self.lock(true)?;
            for path in bad {
                if path.exists() {
                    self.quarantine(&path)?;
                }
            }
        }
        Ok((loaded, warnings))
    }

    fn write_block(&self, n: usize) -> Result<(), CliError> {
        let block = macdonald::block(n).map_err(CliError::Core)?;
        let m = block.in_m_basis().map_err(CliError::Core)?;
        let coefficients: BTreeMap<String, BTreeMap<String, String>> = m
            .iter()
            .map(|(l, row)| {
                (
                    l.to_string(),
                    row.iter()
                        .map(|(mu, c)| (mu.to_string(), c.to_string()))
                        .collect(),
                )
            })
            .collect();
        let reg: Vec<String> = registry::names().into_iter().take(2).collect();
        let file = CacheFile {
            format: FORMAT_VERSION,
            checksum: checksum(FORMAT_VERSION, &reg, n, &coefficients),
            registry: reg,
            degree: n,
            coefficients,
        };
        let path = self.file(n);
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string_pretty(&file).expect("serializable");
        fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))
    }

    /// Writes blocks computed in this session that are not on disk yet.
    pub fn persist(&self, loaded: &[usize]) -> Result<Vec<usize>, CliError> {
        let fresh: Vec<usize> = macdonald::cached_degrees()
            .into_iter()
            .filter(|n| !loaded.contains(n))
            .collect();
        if fresh.is_empty() {
            return Ok(fresh);
        }
        let _guard = self.lock(true)?;
        for &n in &fresh {
            self.write_block(n)?;
        }
        Ok(fresh)
    }

    /// Makes sure blocks `0..=n` are on disk; returns the degrees computed.
    pub fn warm(&self, n: usize) -> Result<(Vec<usize>, Vec<String>), CliError> {
        let (loaded, warnings) = self.load()?;
        for d in 0..=n {
            macdonald::block(d).map_err(CliError::Core)?;
        }
        Ok((self.persist(&loaded)?, warnings))
    }

    pub fn stats(&self) -> Result<Stats, CliError> {
        let _guard = self.lock(false)?;
        let mut stats = Stats::default();
        for (n, path) in self.degrees_on_disk() {
            let bytes = fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
            let polynomials = fs::read_to_string(&path)
                .ok()
                .and_then(|t| serde_json::from_str::<CacheFile>(&t).ok())
                .map_or(0, |f| f.coefficients.len());
            stats.entries.push(Entry {
                degree: n,
                polynomials,
                bytes,
            });
        }
        stats.quarantined = fs::read_dir(self.dir.join(QUARANTINE)).map_or(0, |d| d.count());
        Ok(stats)
    }

    /// Removes all cache files, quarantined ones included.
    pub fn clear(&self) -> Result<usize, CliError> {
        if !self.dir.exists() {
            return Ok(0);
        }
        let _guard = self.lock(true)?;
        let mut removed = 0;
        for (_, path) in self.degrees_on_disk() {
            fs::remove_file(&path).map_err(|e| io_err(&path, e))?;
            removed += 1;
        }
        let qdir = self.dir.join(QUARANTINE);
        if qdir.exists() {
            fs::remove_dir_all(&qdir).map_err(|e| io_err(&qdir, e))?;
        }
        Ok(removed)
    }
}

/// `$QTSYM_CACHE_DIR` is handled by clap; this is the fallback.
pub fn default_dir() -> PathBuf {
    if let Some(d) = std::env::var_os("XDG_DATA_HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(d).join("qtsym");
    }
    match std::env::var_os("HOME") {
        Some(h) => PathBuf::from(h).join(".local/share/qtsym"),
        None => std::env::temp_dir().join("qtsym"),
    }
}
