//! Versioned JSON form of a circuit:
//!
//! ```json
//! {"version": 1, "qubits": 2, "cregs": [{"name": "m", "size": 1}],
//!  "ops": [{"kind": "h", "qubits": [0]},
//!          {"kind": "measure", "qubits": [0], "creg": "m", "cbit": 0}]}
//! ```
//!
//! `mcx` ops list controls, then the target, then the borrowed qubit when
//! `"borrowed": true`. Unknown top-level keys are ignored so that metadata
//! blocks can ride along.

use serde_json::{json, Map, Value};

use super::{Circuit, Clbit, Gate, Instruction, Qubit};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

pub fn to_value(circuit: &Circuit) -> Value {
    let cregs: Vec<Value> = circuit
        .registers()
        .iter()
        .map(|r| json!({"name": r.name, "size": r.size}))
        .collect();
    let ops: Vec<Value> = circuit
        .instructions()
        .iter()
        .map(|inst| {
            let mut op = Map::new();
            op.insert("kind".into(), json!(inst.gate.name()));
            op.insert(
                "qubits".into(),
                json!(inst.qubits.iter().map(|q| q.0).collect::<Vec<_>>()),
            );
            let params = inst.gate.params();
            if !params.is_empty() {
                op.insert("params".into(), json!(params));
            }
            if let Gate::Mcx { borrowed: true, .. } = inst.gate {
                op.insert("borrowed".into(), json!(true));
            }
            if let Some(cb) = inst.clbit {
                op.insert("creg".into(), json!(circuit.registers()[cb.register].name));
                op.insert("cbit".into(), json!(cb.bit));
            }
            Value::Object(op)
        })
        .collect();
    json!({
        "version": FORMAT_VERSION,
        "qubits": circuit.num_qubits(),
        "cregs": cregs,
        "ops": ops,
    })
}

pub fn serialize(circuit: &Circuit) -> String {
    serde_json::to_string_pretty(&to_value(circuit)).expect("circuit JSON is always serializable")
}

pub fn parse(text: &str) -> Result<Circuit> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    from_value(&value)
}

fn perr(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(at, format!("missing field `{key}`")))
}

fn as_usize(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| perr(at, format!("expected a non-negative integer, found {v}")))
}

pub fn from_value(value: &Value) -> Result<Circuit> {
    let root = value.as_object().ok_or_else(|| perr("$", "expected a JSON object"))?;
    let version = as_usize(field(root, "version", "$")?, "version")? as u64;
    if version != FORMAT_VERSION {
        return Err(perr("version", format!("unsupported version {version}")));
    }
    let qubits = as_usize(field(root, "qubits", "$")?, "qubits")?;
    let mut circuit = Circuit::new(qubits);

    if let Some(cregs) = root.get("cregs") {
        let cregs = cregs.as_array().ok_or_else(|| perr("cregs", "expected an array"))?;
        for (i, reg) in cregs.iter().enumerate() {
            let at = format!("cregs[{i}]");
            let obj = reg.as_object().ok_or_else(|| perr(&at, "expected an object"))?;
            let name = field(obj, "name", &at)?
                .as_str()
                .ok_or_else(|| perr(format!("{at}.name"), "expected a string"))?;
            let size = as_usize(field(obj, "size", &at)?, &format!("{at}.size"))?;
            circuit.add_register(name, size).map_err(|e| perr(&at, e.to_string()))?;
        }
    }

    let ops = field(root, "ops", "$")?
        .as_array()
        .ok_or_else(|| perr("ops", "expected an array"))?;
    for (i, op) in ops.iter().enumerate() {
        let at = format!("ops[{i}]");
        let obj = op.as_object().ok_or_else(|| perr(&at, "expected an object"))?;
        let kind = field(obj, "kind", &at)?
            .as_str()
            .ok_or_else(|| perr(format!("{at}.kind"), "expected a string"))?;
        let qs = match obj.get("qubits") {
            None => Vec::new(),
            Some(v) => v
                .as_array()
                .ok_or_else(|| perr(format!("{at}.qubits"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, q)| as_usize(q, &format!("{at}.qubits[{j}]")))
                .collect::<Result<Vec<_>>>()?,
        };
        let params = match obj.get("params") {
            None => Vec::new(),
            Some(v) => v
                .as_array()
                .ok_or_else(|| perr(format!("{at}.params"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    p.as_f64()
                        .ok_or_else(|| perr(format!("{at}.params[{j}]"), "expected a number"))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(perr(
                    format!("{at}.params"),
                    format!("`{kind}` takes {n} parameters, found {}", params.len()),
                ))
            }
        };
        let gate = match kind {
            "x" => Gate::X,
            "y" => Gate::Y,
            "z" => Gate::Z,
            "h" => Gate::H,
            "s" => Gate::S,
            "sdg" => Gate::Sdg,
            "id" => Gate::I,
            "cx" => Gate::CX,
            "cz" => Gate::CZ,
            "swap" => Gate::Swap,
            "measure" => Gate::Measure,
            "reset" => Gate::Reset,
            "barrier" => Gate::Barrier,
            "rx" | "rz" | "rzz" | "rxx" => {
                want(1)?;
                match kind {
                    "rx" => Gate::RX(params[0]),
                    "rz" => Gate::RZ(params[0]),
                    "rzz" => Gate::RZZ(params[0]),
                    _ => Gate::RXX(params[0]),
                }
            }
            "u" => {
                want(3)?;
                Gate::U {
                    theta: params[0],
                    phi: params[1],
                    lambda: params[2],
                }
            }
            "mcx" => {
                let borrowed = match obj.get("borrowed") {
                    None => false,
                    Some(b) => b
                        .as_bool()
                        .ok_or_else(|| perr(format!("{at}.borrowed"), "expected a boolean"))?,
                };
                let extra = 1 + usize::from(borrowed);
                if qs.len() <= extra {
                    return Err(perr(format!("{at}.qubits"), "mcx needs at least one control"));
                }
                Gate::Mcx {
                    controls: qs.len() - extra,
                    borrowed,
                }
            }
            other => return Err(perr(format!("{at}.kind"), format!("unknown gate kind `{other}`"))),
        };
        if !matches!(
            gate,
            Gate::RX(_) | Gate::RZ(_) | Gate::RZZ(_) | Gate::RXX(_) | Gate::U { .. }
        ) {
            want(0)?;
        }
        let clbit = if gate == Gate::Measure {
            let name = field(obj, "creg", &at)?
                .as_str()
                .ok_or_else(|| perr(format!("{at}.creg"), "expected a string"))?;
            let register = circuit
                .register_index(name)
                .ok_or_else(|| perr(format!("{at}.creg"), format!("unknown register `{name}`")))?;
            let bit = as_usize(field(obj, "cbit", &at)?, &format!("{at}.cbit"))?;
            Some(Clbit { register, bit })
        } else {
            None
        };
        let inst = Instruction {
            gate,
            qubits: qs.into_iter().map(Qubit).collect(),
            clbit,
        };
        circuit.push(inst).map_err(|e| perr(&at, e.to_string()))?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_round_trips() {
        let c = Circuit::new(0);
        assert_eq!(parse(&serialize(&c)).unwrap(), c);
    }

    #[test]
    fn unknown_kind_is_named() {
        let text = r#"{"version":1,"qubits":1,"ops":[{"kind":"h","qubits":[0]},{"kind":"frob","qubits":[0]}]}"#;
        let err = parse(text).unwrap_err().to_string();
        assert!(err.contains("frob"), "{err}");
        assert!(err.contains("ops[1].kind"), "{err}");
    }

    #[test]
    fn syntax_error_has_line() {
        let err = parse("{\n\"version\": 1,\n oops}").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn missing_version_is_reported() {
        let err = parse(r#"{"qubits":1,"ops":[]}"#).unwrap_err().to_string();
        assert!(err.contains("version"), "{err}");
    }

    #[test]
    fn bad_qubit_reports_op() {
        let text = r#"{"version":1,"qubits":1,"ops":[{"kind":"cx","qubits":[0,3]}]}"#;
        let err = parse(text).unwrap_err().to_string();
        assert!(err.contains("ops[0]"), "{err}");
    }

    #[test]
    fn mcx_with_borrowed_round_trips() {
        let mut c = Circuit::new(5);
        c.add_register("m", 2).unwrap();
        c.mcx(&[0, 1, 2], 3, Some(4)).mcx(&[0], 1, None).measure(4, "m", 1);
        assert_eq!(parse(&serialize(&c)).unwrap(), c);
    }

    #[test]
    fn ignores_extra_top_level_keys() {
        let text = r#"{"version":1,"qubits":1,"ops":[],"layout":{"n":4}}"#;
        assert_eq!(parse(text).unwrap().num_qubits(), 1);
    }
}
