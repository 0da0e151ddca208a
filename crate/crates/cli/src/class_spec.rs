//! User-facing class handles: a label word, a degree and coordinates in the
//! basis printed by `homology`.

use serde::{Deserialize, Serialize};

use pdstring::algebra::LGClass;
use pdstring::group::Alphabet;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub label: String,
    pub degree: i64,
    pub coeffs: Vec<i64>,
}

impl ClassSpec {
    /// Accepts JSON (`{"label":"t","degree":0,"coeffs":[1]}`) or the text form
    /// printed by reports (`{t, 0, [1]}`).
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if text.contains('"') {
            return serde_json::from_str(text).map_err(|e| CliError::Spec(format!("class {text:?}: {e}")));
        }
        let bad = || CliError::Spec(format!("class {text:?}: expected {{label, degree, [c1,c2,..]}}"));
        let inner = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(bad)?;
        let open = inner.find('[').ok_or_else(bad)?;
        let coeffs = inner[open..].trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let head: Vec<&str> = inner[..open].split(',').map(str::trim).collect();
        let [label, degree, ""] = head.as_slice() else {
            return Err(bad());
        };
        let degree = degree.parse().map_err(|_| bad())?;
        let coeffs = if coeffs.trim().is_empty() {
            Vec::new()
        } else {
            coeffs.split(',').map(|c| c.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        Ok(ClassSpec { label: label.to_string(), degree, coeffs })
    }

    pub fn to_class(&self, alphabet: &Alphabet) -> Result<LGClass, CliError> {
        Ok(LGClass { label: alphabet.parse(&self.label)?, degree: self.degree, coords: self.coeffs.clone() })
    }

    pub fn from_class(x: &LGClass, alphabet: &Alphabet) -> Self {
        ClassSpec { label: alphabet.format(&x.label), degree: x.degree, coeffs: x.coords.clone() }
    }

    pub fn describe(&self) -> String {
        let c: Vec<String> = self.coeffs.iter().map(i64::to_string).collect();
        format!("{{{}, {}, [{}]}}", self.label, self.degree, c.join(","))
    }
}
