//! In-memory editing sessions: the server-side mirror of the Sign Display.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use swift_core::{Catalog, Direction, GlyphId, Selection, Sign};

use crate::error::ApiError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionState {
    pub session_id: String,
    pub sign: Sign,
    pub selection: Selection,
    pub last_area: Option<String>,
}

impl SessionState {
    pub fn new(session_id: String) -> Self {
        SessionState {
            session_id,
            sign: Sign::default(),
            selection: Selection::empty(),
            last_area: None,
        }
    }

    /// Applies one editing operation. On error the state is untouched.
    pub fn apply(&mut self, op: Op, catalog: &Catalog) -> Result<(), ApiError> {
        let sel = &self.selection;
        let (sign, selection) = match op {
            Op::Add { glyph, x, y } => (self.sign.add_glyph(catalog, &glyph, x, y)?, sel.clone()),
            Op::Move { dx, dy } => (self.sign.move_by(sel, dx, dy)?, sel.clone()),
            Op::Rotate { direction } => (self.sign.rotate(sel, direction)?, sel.clone()),
            Op::Mirror {} => (self.sign.mirror(sel)?, sel.clone()),
            Op::Scale { scale } => (self.sign.set_scale(sel, scale)?, sel.clone()),
            Op::Delete {} => (self.sign.delete(sel)?, Selection::empty()),
            Op::Clear {} => (self.sign.clear(), Selection::empty()),
            Op::Select { indices } => {
                let next: Selection = indices.into_iter().collect();
                next.check(&self.sign)?;
                (self.sign.clone(), next)
            }
            Op::SetArea { area } => {
                if let Some(token) = &area {
                    catalog
                        .category(token)
                        .map_err(|e| ApiError::InvalidOp(e.to_string()))?;
                }
                self.last_area = area;
                return Ok(());
            }
            Op::SetLabel { label } => {
                let mut sign = self.sign.clone();
                sign.label = label;
                (sign, sel.clone())
            }
        };
        self.sign = sign;
        self.selection = selection;
        Ok(())
    }
}

/// Body of `POST /api/sessions/{id}/ops`. Edits act on the current selection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Op {
    Add { glyph: GlyphId, x: i32, y: i32 },
    Move { dx: i32, dy: i32 },
    Rotate { direction: Direction },
    Mirror {},
    Delete {},
    Clear {},
    Scale { scale: u32 },
    Select { indices: Vec<usize> },
    SetArea { area: Option<String> },
    SetLabel { label: Option<String> },
}

struct Slot {
    state: Arc<Mutex<SessionState>>,
    last_used: Instant,
}

/// Session table with idle expiry. Each session has its own lock so edits
/// to one session serialize without blocking the others.
pub struct Sessions {
    ttl: Duration,
    slots: Mutex<HashMap<String, Slot>>,
}

impl Sessions {
    pub fn new(ttl: Duration) -> Self {
        Sessions {
            ttl,
            slots: Mutex::new(HashMap::new()),
        }
    }

    pub fn create(&self) -> SessionState {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let state = SessionState::new(id.clone());
        let mut slots = self.slots.lock().unwrap();
        self.sweep_locked(&mut slots);
        slots.insert(
            id,
            Slot {
                state: Arc::new(Mutex::new(state.clone())),
                last_used: Instant::now(),
            },
        );
        state
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<SessionState>>, ApiError> {
        let mut slots = self.slots.lock().unwrap();
        self.sweep_locked(&mut slots);
        let slot = slots
            .get_mut(id)
            .ok_or_else(|| ApiError::NotFound(format!("session `{id}` not found")))?;
        slot.last_used = Instant::now();
        Ok(Arc::clone(&slot.state))
    }

    pub fn remove(&self, id: &str) -> Result<(), ApiError> {
        self.slots
            .lock()
            .unwrap()
            .remove(id)
            .map(|_| ())
            .ok_or_else(|| ApiError::NotFound(format!("session `{id}` not found")))
    }

    pub fn sweep(&self) {
        let mut slots = self.slots.lock().unwrap();
        self.sweep_locked(&mut slots);
    }

    pub fn len(&self) -> usize {
        self.slots.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sweep_locked(&self, slots: &mut HashMap<String, Slot>) {
        let ttl = self.ttl;
        slots.retain(|_, s| s.last_used.elapsed() < ttl);
    }
}
