//! Single-page HTTP retrieval with bounded redirects, body size and time.

use std::io::Read;
use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::header::{CONTENT_TYPE, LOCATION};
use reqwest::redirect::Policy;
use thiserror::Error;
use url::Url;

pub const DEFAULT_USER_AGENT: &str = concat!("schemalint/", env!("CARGO_PKG_VERSION"), " (annotation audit)");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchConfig {
    /// Bound on each request, connect to last body byte.
    pub timeout: Duration,
    pub max_redirects: usize,
    pub max_body: u64,
    pub user_agent: String,
}

impl Default for FetchConfig {
    fn default() -> Self {
        Self {
            timeout: Duration::from_secs(20),
            max_redirects: 5,
            max_body: 8 * 1024 * 1024,
            user_agent: DEFAULT_USER_AGENT.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchResult {
    /// Absolute URL of the last response, after redirects.
    pub final_url: Url,
    pub status: u16,
    pub content_type: Option<String>,
    pub body: Vec<u8>,
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("only absolute http(s) URLs can be fetched: {0}")]
    UnsupportedUrl(String),
    #[error("network error for {url}: {source}")]
    Network {
        url: Url,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error("response body of {url} exceeds {limit} bytes")]
    TooLarge { url: Url, limit: u64 },
    #[error("more than {limit} redirects starting at {url}")]
    TooManyRedirects { url: Url, limit: usize },
}

fn is_redirect(status: u16) -> bool {
    matches!(status, 301 | 302 | 303 | 307 | 308)
}

/// Fetches `url`, following up to `config.max_redirects` redirects. Non-2xx
/// final statuses are returned, not raised.
pub fn fetch(url: &Url, config: &FetchConfig) -> Result<FetchResult, FetchError> {
    if !matches!(url.scheme(), "http" | "https") || url.host_str().is_none() {
        return Err(FetchError::UnsupportedUrl(url.to_string()));
    }
    let client = Client::builder()
        .redirect(Policy::none())
        .timeout(config.timeout)
        .connect_timeout(config.timeout)
        .user_agent(config.user_agent.clone())
        .build()
        .map_err(|source| FetchError::Network { url: url.clone(), source: source.into() })?;

    let mut current = url.clone();
    let mut redirects = 0;
    loop {
        let response = client
            .get(current.clone())
            .send()
            .map_err(|source| FetchError::Network { url: current.clone(), source: source.into() })?;
        let status = response.status().as_u16();
        if is_redirect(status) {
            if let Some(next) =
                response.headers().get(LOCATION).and_then(|l| l.to_str().ok()).and_then(|l| current.join(l).ok())
            {
                if redirects == config.max_redirects {
                    return Err(FetchError::TooManyRedirects { url: url.clone(), limit: config.max_redirects });
                }
                redirects += 1;
                current = next;
                continue;
            }
        }

        if response.content_length().is_some_and(|len| len > config.max_body) {
            return Err(FetchError::TooLarge { url: current, limit: config.max_body });
        }
        let content_type = response.headers().get(CONTENT_TYPE).and_then(|v| v.to_str().ok()).map(str::to_owned);
        let mut body = Vec::new();
        response
            .take(config.max_body + 1)
            .read_to_end(&mut body)
            .map_err(|source| FetchError::Network { url: current.clone(), source: source.into() })?;
        if body.len() as u64 > config.max_body {
            return Err(FetchError::TooLarge { url: current, limit: config.max_body });
        }
        return Ok(FetchResult { final_url: current, status, content_type, body });
    }
}
