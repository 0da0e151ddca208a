//! Serializes maps with structured keys as lists of pairs, which JSON accepts.

use std::collections::BTreeMap;

use serde::de::{Deserialize, Deserializer};
use serde::ser::{Serialize, Serializer};

pub fn serialize<K: Serialize, V: Serialize, S: Serializer>(map: &BTreeMap<K, V>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(map.iter())
}

pub fn deserialize<'de, K, V, D>(d: D) -> Result<BTreeMap<K, V>, D::Error>
where
    K: Deserialize<'de> + Ord,
    V: Deserialize<'de>,
    D: Deserializer<'de>,
{
    Ok(Vec::<(K, V)>::deserialize(d)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, PartialEq, serde::Serialize, serde::Deserialize)]
    struct M(#[serde(with = "super")] BTreeMap<(usize, Vec<i32>), i64>);

    #[test]
    fn structured_keys_round_trip_through_json() {
        let m = M(BTreeMap::from([((1, vec![2, -3]), 4), ((0, vec![]), -1)]));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<M>(&s).unwrap(), m);
    }
}
