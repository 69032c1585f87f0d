//! Reading distributions from disk or over HTTP, with an on-disk cache.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::manifest::is_url;
use crate::AppError;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);
pub const DEFAULT_RETRIES: u32 = 2;

/// Raw bytes of a distribution plus what is known about its type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub bytes: Vec<u8>,
    pub media_type: Option<String>,
    /// File name or URL, used for extension-based format detection.
    pub name: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheMeta {
    url: String,
    media_type: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Fetcher {
    pub cache_dir: Option<PathBuf>,
    pub timeout: Duration,
    pub retries: u32,
}

impl Default for Fetcher {
    fn default() -> Self {
        Self {
            cache_dir: None,
            timeout: DEFAULT_TIMEOUT,
            retries: DEFAULT_RETRIES,
        }
    }
}

impl Fetcher {
    pub fn with_cache(cache_dir: Option<PathBuf>) -> Self {
        Self {
            cache_dir,
            ..Self::default()
        }
    }

    pub fn fetch(&self, source: &str) -> Result<Fetched, AppError> {
        if is_url(source) {
            self.fetch_url(source.trim())
        } else {
            let bytes =
                std::fs::read(source).map_err(|e| AppError::Fetch(format!("{source}: {e}")))?;
            Ok(Fetched {
                bytes,
                media_type: None,
                name: source.to_owned(),
            })
        }
    }

    fn fetch_url(&self, url: &str) -> Result<Fetched, AppError> {
        let key = cache_key(url);
        if let Some(dir) = &self.cache_dir {
            if let Some(hit) = read_cache(dir, &key) {
                return Ok(hit);
            }
        }

        let config = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build();
        let agent = ureq::Agent::new_with_config(config);

        let mut last_error = String::new();
        for _ in 0..=self.retries {
            match agent.get(url).call() {
                Ok(mut response) => {
                    let media_type = response
                        .headers()
                        .get("content-type")
                        .and_then(|v| v.to_str().ok())
                        .map(str::to_owned);
                    match response
                        .body_mut()
                        .with_config()
                        .limit(u64::MAX)
                        .read_to_vec()
                    {
                        Ok(bytes) => {
                            let fetched = Fetched {
                                bytes,
                                media_type,
                                name: url.to_owned(),
                            };
                            if let Some(dir) = &self.cache_dir {
                                write_cache(dir, &key, &fetched)?;
                            }
                            return Ok(fetched);
                        }
                        Err(e) => last_error = e.to_string(),
                    }
                }
                // client errors will not change on retry
                Err(ureq::Error::StatusCode(code)) if (400..500).contains(&code) => {
                    return Err(AppError::Fetch(format!("{url}: HTTP status {code}")));
                }
                Err(e) => last_error = e.to_string(),
            }
        }
        Err(AppError::Fetch(format!(
            "{url}: {last_error} (after {} attempts)",
            self.retries + 1
        )))
    }
}

fn cache_key(url: &str) -> String {
    hex::encode(Sha256::digest(url.as_bytes()))
}

fn read_cache(dir: &Path, key: &str) -> Option<Fetched> {
    let meta: CacheMeta =
        serde_json::from_slice(&std::fs::read(dir.join(format!("{key}.meta.json"))).ok()?).ok()?;
    let bytes = std::fs::read(dir.join(format!("{key}.body"))).ok()?;
    Some(Fetched {
        bytes,
        media_type: meta.media_type,
        name: meta.url,
    })
}

/// Body first, then metadata, each through a rename so a reader never sees
/// a half-written entry.
fn write_cache(dir: &Path, key: &str, fetched: &Fetched) -> Result<(), AppError> {
    let io = |e: std::io::Error| AppError::Fetch(format!("cache {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let meta = serde_json::to_vec(&CacheMeta {
        url: fetched.name.clone(),
        media_type: fetched.media_type.clone(),
    })
    .expect("cache metadata serializes");
    for (suffix, content) in [("body", &fetched.bytes), ("meta.json", &meta)] {
        let target = dir.join(format!("{key}.{suffix}"));
        let tmp = dir.join(format!("{key}.{suffix}.{}.tmp", std::process::id()));
        let mut file = std::fs::File::create(&tmp).map_err(io)?;
        file.write_all(content).map_err(io)?;
        std::fs::rename(&tmp, &target).map_err(io)?;
    }
    Ok(())
}
