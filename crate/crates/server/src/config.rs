use std::net::SocketAddr;
use std::path::PathBuf;

pub const DEFAULT_BIND: &str = "127.0.0.1:8080";
pub const DEFAULT_TOKEN_TTL_SECS: u64 = 86_400;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub data_dir: PathBuf,
    pub bind: SocketAddr,
    pub token_secret: Vec<u8>,
    pub token_ttl_secs: u64,
}

#[derive(Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl ServerConfig {
    /// Reads `SAPHIR_DATA_DIR`, `SAPHIR_BIND`, `SAPHIR_TOKEN_SECRET` and
    /// `SAPHIR_TOKEN_TTL_SECS` through `var`.
    pub fn from_vars(var: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let data_dir = var("SAPHIR_DATA_DIR").ok_or_else(|| ConfigError("SAPHIR_DATA_DIR is not set".into()))?;
        let bind = var("SAPHIR_BIND").unwrap_or_else(|| DEFAULT_BIND.into());
        let bind = bind
            .parse()
            .map_err(|_| ConfigError(format!("SAPHIR_BIND: {bind:?} is not a host:port address")))?;
        let token_secret = var("SAPHIR_TOKEN_SECRET")
            .filter(|s| !s.is_empty())
            .ok_or_else(|| ConfigError("SAPHIR_TOKEN_SECRET is not set".into()))?
            .into_bytes();
        let token_ttl_secs = match var("SAPHIR_TOKEN_TTL_SECS") {
            None => DEFAULT_TOKEN_TTL_SECS,
            Some(raw) => raw
                .parse()
                .map_err(|_| ConfigError(format!("SAPHIR_TOKEN_TTL_SECS: {raw:?} is not a number of seconds")))?,
        };
        Ok(Self {
            data_dir: data_dir.into(),
            bind,
            token_secret,
            token_ttl_secs,
        })
    }

    pub fn from_env() -> Result<Self, ConfigError> {
        Self::from_vars(|k| std::env::var(k).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn vars(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let map: HashMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| map.get(k).cloned()
    }

    #[test]
    fn defaults() {
        let c = ServerConfig::from_vars(vars(&[("SAPHIR_DATA_DIR", "/tmp/x"), ("SAPHIR_TOKEN_SECRET", "s")])).unwrap();
        assert_eq!(c.token_ttl_secs, 86_400);
        assert_eq!(c.bind.to_string(), DEFAULT_BIND);
    }

    #[test]
    fn missing_secret_and_bad_ttl() {
        assert!(ServerConfig::from_vars(vars(&[("SAPHIR_DATA_DIR", "/tmp/x")])).is_err());
        let bad = vars(&[
            ("SAPHIR_DATA_DIR", "d"),
            ("SAPHIR_TOKEN_SECRET", "s"),
            ("SAPHIR_TOKEN_TTL_SECS", "soon"),
        ]);
        assert!(ServerConfig::from_vars(bad).is_err());
    }
}
