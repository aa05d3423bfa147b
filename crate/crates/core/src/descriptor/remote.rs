//! Chat-completions client for the remote descriptor.

use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{prompts, validate, Descriptor, DescriptorRequest, DescriptorResponse, ENV_KEY, ENV_MODEL, ENV_URL};
use crate::error::DescriptorError;

pub const TEMPERATURE: f64 = 0.2;
pub const DEFAULT_MODEL: &str = "gpt-4";

#[derive(Debug, Clone, PartialEq)]
pub struct RemoteConfig {
    pub url: String,
    pub key: Option<String>,
    pub model: String,
    pub timeout: Duration,
}

impl RemoteConfig {
    pub fn new(url: impl Into<String>) -> Self {
        RemoteConfig {
            url: url.into(),
            key: None,
            model: DEFAULT_MODEL.to_string(),
            timeout: Duration::from_secs(60),
        }
    }

    /// Reads `DESIGNLINT_LLM_URL`, `DESIGNLINT_LLM_KEY` and
    /// `DESIGNLINT_LLM_MODEL`; `None` when no URL is configured.
    pub fn from_env() -> Option<Self> {
        let url = std::env::var(ENV_URL).ok().filter(|u| !u.trim().is_empty())?;
        let mut config = RemoteConfig::new(url);
        config.key = std::env::var(ENV_KEY).ok().filter(|k| !k.is_empty());
        if let Ok(model) = std::env::var(ENV_MODEL) {
            if !model.is_empty() {
                config.model = model;
            }
        }
        Some(config)
    }
}

/// Sends each request as a chat completion and validates the reply. Replies
/// are cached per (kind, payload hash) for the lifetime of the descriptor.
pub struct RemoteDescriptor {
    config: RemoteConfig,
    agent: ureq::Agent,
    cache: Mutex<HashMap<(String, String), DescriptorResponse>>,
    notes: Mutex<Vec<String>>,
}

impl RemoteDescriptor {
    pub fn new(config: RemoteConfig) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .build()
            .into();
        RemoteDescriptor {
            config,
            agent,
            cache: Mutex::new(HashMap::new()),
            notes: Mutex::new(Vec::new()),
        }
    }

    fn cache_key(request: &DescriptorRequest) -> (String, String) {
        let payload = serde_json::to_string(request).unwrap_or_default();
        let hash: String = Sha256::digest(payload.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        (request.kind().to_string(), hash)
    }

    fn call(&self, request: &DescriptorRequest) -> Result<String, DescriptorError> {
        let (system, user) = prompts::render(request);
        let body = json!({
            "model": self.config.model,
            "temperature": TEMPERATURE,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        });
        let mut req = self.agent.post(&self.config.url);
        if let Some(key) = &self.config.key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(&body)
            .map_err(|e| DescriptorError::RemoteUnavailable(e.to_string()))?;
        let reply: Value = resp
            .body_mut()
            .read_json()
            .map_err(|e| DescriptorError::Schema(format!("reply is not JSON: {e}")))?;
        reply
            .pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| DescriptorError::Schema("reply has no choices[0].message.content".into()))
    }

    fn attempt(&self, request: &DescriptorRequest) -> Result<DescriptorResponse, DescriptorError> {
        let content = self.call(request)?;
        let response = prompts::parse_reply(request, &content)?;
        validate(request, &response)?;
        Ok(response)
    }
}

impl Descriptor for RemoteDescriptor {
    fn describe(&self, request: &DescriptorRequest) -> Result<DescriptorResponse, DescriptorError> {
        let key = Self::cache_key(request);
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let response = match self.attempt(request) {
            Err(DescriptorError::Schema(first)) => {
                self.notes
                    .lock()
                    .expect("notes lock")
                    .push(format!("{} reply rejected ({first}); retried once", request.kind()));
                self.attempt(request)?
            }
            other => other?,
        };
        self.cache.lock().expect("cache lock").insert(key, response.clone());
        Ok(response)
    }

    fn mode_name(&self) -> &'static str {
        "remote"
    }

    fn take_notes(&self) -> Vec<String> {
        std::mem::take(&mut *self.notes.lock().expect("notes lock"))
    }
}
