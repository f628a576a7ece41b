//! Plain-text key-value config files: one `key = value` per line, `#`
//! comments, keys named after the long CLI flags. Flags override config.

use std::collections::BTreeMap;

pub const KNOWN_KEYS: &[&str] = &[
    "p", "f", "n", "variety", "i-min", "i-max", "r-min", "r-max", "mod-pm", "format", "oracle",
];

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "config line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            ));
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(format!("config line {}: unknown key {key:?}", lineno + 1));
        }
        out.insert(key.to_string(), value.to_string());
    }
    Ok(out)
}

pub fn get_parsed<T: std::str::FromStr>(
    config: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, String> {
    match config.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| format!("config key {key:?}: cannot parse {raw:?}")),
    }
}
