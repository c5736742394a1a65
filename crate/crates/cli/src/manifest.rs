use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Versions {
    pub mquot: &'static str,
    pub schema: u32,
}

impl Versions {
    pub fn current() -> Self {
        Versions {
            mquot: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA_VERSION,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub threads: usize,
}

/// Everything needed to reproduce and identify a run. The digest covers the
/// command, parameters, versions and result, never the timing.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub versions: Versions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
    pub digest: String,
}

#[derive(Serialize)]
struct Digested<'a> {
    command: &'a str,
    parameters: &'a Value,
    versions: &'a Versions,
    result: &'a Value,
}

pub fn digest(command: &str, parameters: &Value, versions: &Versions, result: &Value) -> String {
    let bytes = serde_json::to_vec(&Digested {
        command,
        parameters,
        versions,
        result,
    })
    .expect("JSON values always serialize");
    let hash = Sha256::digest(&bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

#[derive(Debug, Serialize)]
pub struct Output {
    pub manifest: RunManifest,
    pub result: Value,
}

impl Output {
    pub fn new(command: &str, parameters: Value, result: Value, timing: Option<Timing>) -> Self {
        let versions = Versions::current();
        let digest = digest(command, &parameters, &versions, &result);
        Output {
            manifest: RunManifest {
                command: command.into(),
                parameters,
                versions,
                timing,
                digest,
            },
            result,
        }
    }
}
