//! Browser bindings for the torus explorer page in `www/`.

use risp_dyn::analysis::{psi_branches_with, rotation_belts, trace_fixed_curves};
use risp_dyn::iterate::{iterate_grid, GridOptions};
use risp_dyn::io::load_risp;
use risp_dyn::{catalog, cis, Risp};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Explorer {
    id: String,
    map: Risp,
}

#[wasm_bindgen]
impl Explorer {
    #[wasm_bindgen(js_name = fromExample)]
    pub fn from_example(id: &str) -> Result<Explorer, JsError> {
        let map = catalog::by_id(id).ok_or_else(|| JsError::new(&format!("unknown example {id}")))?;
        Ok(Explorer { id: id.to_string(), map })
    }

    #[wasm_bindgen(js_name = fromJson)]
    pub fn from_json(json: &str) -> Result<Explorer, JsError> {
        let (id, map) = load_risp(json).map_err(js_err)?;
        Ok(Explorer {
            id: id.unwrap_or_else(|| "custom".into()),
            map,
        })
    }

    #[wasm_bindgen(getter)]
    pub fn id(&self) -> String {
        self.id.clone()
    }

    #[wasm_bindgen(js_name = isSimple)]
    pub fn is_simple(&self) -> bool {
        self.map.fibers().is_ok()
    }

    /// Frame `n` of the seed grid as `[t1, t2, flag, ...]`.
    #[wasm_bindgen(js_name = orbitFrame)]
    pub fn orbit_frame(&self, lines: Vec<f64>, points_per_line: usize, n: usize) -> Result<Vec<f64>, JsError> {
        let ds = iterate_grid(&self.map, &self.id, &lines, points_per_line, n, GridOptions::default())
            .map_err(js_err)?;
        let last = n - 1;
        Ok(ds.frames[last]
            .iter()
            .zip(&ds.flags[last])
            .flat_map(|(p, f)| [p.0, p.1, f64::from(u8::from(*f))])
            .collect())
    }

    /// `[t2, |psi1|, |psi2|, ...]` over `samples` fibers.
    #[wasm_bindgen(js_name = psiProfile)]
    pub fn psi_profile(&self, samples: usize) -> Result<Vec<f64>, JsError> {
        let step = 2.0 * std::f64::consts::PI / samples as f64;
        let mut out = Vec::with_capacity(3 * samples);
        let mut prev = None;
        for k in 0..samples {
            let t = -std::f64::consts::PI + step * (k as f64 + 0.5);
            match psi_branches_with(&self.map, cis(t), prev) {
                Ok(pp) => {
                    prev = Some(pp.sqrt_q);
                    out.extend([t, pp.psi1.norm(), pp.psi2.norm()]);
                }
                Err(_) => out.extend([t, f64::NAN, f64::NAN]),
            }
        }
        Ok(out)
    }

    /// The fixed-point curves on the torus as `[t2, t1, ...]`.
    #[wasm_bindgen(js_name = fixedCurves)]
    pub fn fixed_curves(&self, samples: usize) -> Result<Vec<f64>, JsError> {
        let tr = trace_fixed_curves(&self.map, samples).map_err(js_err)?;
        Ok(tr
            .branches
            .iter()
            .flat_map(|b| b.samples.iter())
            .filter(|s| s.on_torus)
            .flat_map(|s| [s.lambda_angle, s.z1.arg()])
            .collect())
    }

    /// Fiber map at `z2 = e^{i t2}` as JSON.
    #[wasm_bindgen(js_name = classifyFiber)]
    pub fn classify_fiber(&self, t2: f64) -> Result<String, JsError> {
        let m = self.map.fiber_map(cis(t2)).map_err(js_err)?;
        let json = serde_json::json!({
            "t2": t2,
            "kind": m.kind,
            "rotation_angle": m.rotation_angle(),
            "fixed_points": m.fixed_points,
        });
        Ok(json.to_string())
    }

    /// Belt report as JSON.
    pub fn belts(&self) -> Result<String, JsError> {
        let rep = rotation_belts(&self.map).map_err(js_err)?;
        serde_json::to_string(&rep).map_err(js_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_layout() {
        let e = Explorer::from_example("ex21").unwrap();
        let f = e.orbit_frame(vec![0.5], 10, 3).unwrap();
        assert_eq!(f.len(), 30);
        assert!(e.psi_profile(16).unwrap().len() == 48);
        assert!(e.classify_fiber(0.3).unwrap().contains("\"kind\""));
    }
}
