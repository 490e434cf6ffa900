//! JSON run configuration.
//!
//! ```json
//! { "subcommand": "fig5", "parameters": { "sigma": "0:1:11" },
//!   "seed": 7, "reps": 50000, "tol": 1e-9, "output_path": "fig5.csv", "format": "csv" }
//! ```
//!
//! Parameters are the subcommand's long flags without the dashes; a boolean
//! `true` sets a switch and an array is joined with commas.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use crate::args::Format;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: Option<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub reps: Option<u64>,
    pub tol: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    /// Flags for the subcommand, skipping any the user already passed.
    pub fn parameter_args(&self, user_args: &[OsString]) -> Result<Vec<OsString>, String> {
        let mut out = Vec::new();
        for (key, value) in &self.parameters {
            let flag = format!("--{}", key.replace('_', "-"));
            let given = user_args.iter().any(|a| {
                let a = a.to_string_lossy();
                a == flag || a.starts_with(&format!("{flag}="))
            });
            if given {
                continue;
            }
            match value {
                Value::Bool(true) => out.push(flag.into()),
                Value::Bool(false) | Value::Null => {}
                Value::Number(n) => out.push(format!("{flag}={n}").into()),
                Value::String(s) => out.push(format!("{flag}={s}").into()),
                Value::Array(items) => {
                    let parts: Result<Vec<String>, String> = items
                        .iter()
                        .map(|v| match v {
                            Value::Number(n) => Ok(n.to_string()),
                            Value::String(s) => Ok(s.clone()),
                            other => Err(format!("parameter `{key}`: unsupported list item {other}")),
                        })
                        .collect();
                    out.push(format!("{flag}={}", parts?.join(",")).into());
                }
                Value::Object(_) => return Err(format!("parameter `{key}`: nested objects are not supported")),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_become_flags() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"subcommand":"fig4","parameters":{"sigma":[0,0.05],"mc":true,"delta":"-0.1:0.1:3"}}"#,
        )
        .unwrap();
        let args = cfg.parameter_args(&[]).unwrap();
        let args: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(args, ["--delta=-0.1:0.1:3", "--mc", "--sigma=0,0.05"]);
        let user = [OsString::from("--sigma=0.1")];
        assert_eq!(cfg.parameter_args(&user).unwrap().len(), 2);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sed": 1}"#).is_err());
    }
}
