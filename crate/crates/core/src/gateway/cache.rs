use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{GatewayError, GenerationRequest, Generator};

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    request: GenerationRequest,
    response: String,
}

/// One JSON file per request hash. Writable caches delegate misses to the
/// inner backend and store the answer; read-only caches report the miss.
pub struct CacheGenerator {
    dir: PathBuf,
    inner: Option<Box<dyn Generator>>,
    read_only: bool,
}

impl CacheGenerator {
    pub fn new(
        dir: impl AsRef<Path>,
        inner: Option<Box<dyn Generator>>,
        read_only: bool,
    ) -> Result<Self, GatewayError> {
        let dir = dir.as_ref().to_path_buf();
        if !read_only {
            std::fs::create_dir_all(&dir)?;
        }
        Ok(CacheGenerator {
            dir,
            inner,
            read_only,
        })
    }

    fn path(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("{hash}.json"))
    }

    fn lookup(&self, hash: &str, req: &GenerationRequest) -> Result<Option<String>, GatewayError> {
        let path = self.path(hash);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: Entry = serde_json::from_str(&text)
            .map_err(|e| GatewayError::Io(format!("{}: {e}", path.display())))?;
        if entry.request != *req {
            return Err(GatewayError::CacheCollision(hash.to_string()));
        }
        Ok(Some(entry.response))
    }

    fn store(&self, hash: &str, req: &GenerationRequest, response: &str) -> Result<(), GatewayError> {
        let entry = Entry {
            request: req.clone(),
            response: response.to_string(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer_pretty(&mut tmp, &entry).map_err(|e| GatewayError::Io(e.to_string()))?;
        tmp.flush()?;
        tmp.persist(self.path(hash)).map_err(|e| GatewayError::Io(e.to_string()))?;
        Ok(())
    }
}

impl Generator for CacheGenerator {
    fn complete(&self, req: &GenerationRequest) -> Result<String, GatewayError> {
        let hash = req.hash();
        if let Some(hit) = self.lookup(&hash, req)? {
            return Ok(hit);
        }
        match (&self.inner, self.read_only) {
            (Some(inner), false) => {
                let response = inner.complete(req)?;
                self.store(&hash, req, &response)?;
                Ok(response)
            }
            _ => Err(GatewayError::CacheMiss(hash)),
        }
    }
}
