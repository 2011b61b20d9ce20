//! JSON interchange format.
//!
//! ```json
//! {"events": [{"id": 0, "label": "a"}, {"id": 1, "label": "b"}],
//!  "order": [[0, 1]],
//!  "boxes": [[0, 1]]}
//! ```
//!
//! Ids need not be dense; they are renumbered in ascending order. The order
//! may be given as any acyclic relation and is closed transitively. Export
//! writes covering pairs only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EventSet, Label, Poset, PosetError, MAX_EVENTS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJsonEvent {
    pub id: u64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub events: Vec<PosetJsonEvent>,
    #[serde(default)]
    pub order: Vec<[u64; 2]>,
    #[serde(default)]
    pub boxes: Vec<Vec<u64>>,
}

impl PosetJson {
    pub fn from_poset(p: &Poset) -> PosetJson {
        PosetJson {
            events: p
                .labels()
                .iter()
                .enumerate()
                .map(|(i, l)| PosetJsonEvent {
                    id: i as u64,
                    label: l.to_string(),
                })
                .collect(),
            order: p
                .covering_pairs()
                .into_iter()
                .map(|(a, b)| [a as u64, b as u64])
                .collect(),
            boxes: p
                .boxes()
                .iter()
                .map(|b| b.iter().map(|e| e as u64).collect())
                .collect(),
        }
    }

    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        if self.events.len() > MAX_EVENTS {
            return Err(PosetError::TooManyEvents(self.events.len()));
        }
        let mut by_id = BTreeMap::new();
        for ev in &self.events {
            if by_id.insert(ev.id, ev.label.as_str()).is_some() {
                return Err(PosetError::DuplicateId(ev.id));
            }
        }
        let index: BTreeMap<u64, usize> = by_id.keys().enumerate().map(|(i, &id)| (id, i)).collect();
        let lookup = |id: u64| index.get(&id).copied().ok_or(PosetError::UnknownId(id));
        let labels = by_id
            .values()
            .map(|l| Label::new(l))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = self
            .order
            .iter()
            .map(|&[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, PosetError>>()?;
        let boxes = self
            .boxes
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&id| lookup(id))
                    .collect::<Result<EventSet, PosetError>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Poset::from_parts(labels, edges, boxes)
    }
}

impl Poset {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PosetJson::from_poset(self)).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Poset, PosetError> {
        let raw: PosetJson = serde_json::from_str(text).map_err(|e| PosetError::Json(e.to_string()))?;
        raw.to_poset()
    }
}
