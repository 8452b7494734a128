use std::fmt;
use std::fs;

use serde_json::Value;
use twolocal_core::derivation::{
    default_depth, derivation_space_basis, extend_from_generators, leibniz_check, recover_inner_witt,
    recover_inner_wplus, Extension,
};
use twolocal_core::two_local::{
    additivity_violation, centralizer, rigidity_check, thin_delta, thin_witness, verify_pair,
};
use twolocal_core::{bracket, jacobi_check, Algebra, Element, Error, LinearMapTable, Window};

use crate::render;
use crate::{Command, Format, TwoLocalCommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Precondition(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::IndexOutOfDomain { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn algebra(name: &str) -> CliResult<Algebra> {
    name.parse().map_err(|_| {
        CliError::Usage(format!(
            "unknown algebra `{name}` (expected witt, wplus, wplus_ext or thin)"
        ))
    })
}

fn require(alg: Algebra, allowed: &[Algebra], command: &str) -> CliResult<()> {
    if allowed.contains(&alg) {
        Ok(())
    } else {
        let names: Vec<&str> = allowed.iter().map(|a| a.name()).collect();
        Err(CliError::Precondition(format!(
            "`{command}` supports --algebra {}",
            names.join("|")
        )))
    }
}

fn window(text: &str) -> CliResult<Window> {
    let bad = || CliError::Parse(format!("invalid window `{text}` (expected a:b with a <= b)"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(Window::new(a, b))
}

fn read_json(path: &str) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read `{path}`: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("`{path}` is not valid JSON: {e}")))
}

fn read_map(path: &str, expected: Algebra) -> CliResult<LinearMapTable> {
    let map = LinearMapTable::from_json(&read_json(path)?)?;
    if map.algebra() != expected {
        return Err(CliError::Precondition(format!(
            "map in `{path}` is on {}, not {expected}",
            map.algebra()
        )));
    }
    Ok(map)
}

pub fn run(command: Command, format: Format) -> CliResult<String> {
    match command {
        Command::Bracket { algebra: a, x, y } => {
            let alg = algebra(&a)?;
            let (x, y) = (Element::parse(alg, &x)?, Element::parse(alg, &y)?);
            let r = bracket(&x, &y)?;
            Ok(render::bracket(format, &x, &y, &r))
        }
        Command::Jacobi { algebra: a, window: w } => {
            let alg = algebra(&a)?;
            let w = window(&w)?;
            alg.check_window(&w)?;
            Ok(render::jacobi(format, alg, w, &jacobi_check(&alg, w)))
        }
        Command::Leibniz { algebra: a, map, depth } => {
            let alg = algebra(&a)?;
            let d = read_map(&map, alg)?;
            let report = leibniz_check(&d, depth)?;
            Ok(render::leibniz(format, depth, &report))
        }
        Command::Extend {
            algebra: a,
            e1,
            e2,
            truncation,
        } => {
            let alg = algebra(&a)?;
            require(alg, &[Algebra::PositiveWitt, Algebra::Thin], "extend")?;
            let (e1, e2) = (Element::parse(alg, &e1)?, Element::parse(alg, &e2)?);
            let out = extend_from_generators(alg, &e1, &e2, truncation)?;
            Ok(render::extension(format, &out))
        }
        Command::DerBasis {
            algebra: a,
            support,
            depth,
        } => {
            let alg = algebra(&a)?;
            require(alg, &[Algebra::PositiveWitt, Algebra::Thin], "der-basis")?;
            let depth = depth.unwrap_or_else(|| default_depth(support));
            let space = derivation_space_basis(alg, support, depth)?;
            let inner = if alg == Algebra::PositiveWitt {
                let trunc = 2 * (support + 1) + 3;
                let elems = space
                    .basis
                    .basis()
                    .iter()
                    .map(|b| match space.table(b, trunc)? {
                        Extension::Consistent(d) => recover_inner_wplus(&d).map(Ok),
                        Extension::Inconsistent(rep) => Ok(Err(rep.to_string())),
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                Some(elems)
            } else {
                None
            };
            Ok(render::derivation_space(format, &space, inner.as_deref()))
        }
        Command::RecoverInner { algebra: a, map } => {
            let alg = algebra(&a)?;
            require(alg, &[Algebra::Witt, Algebra::PositiveWitt], "recover-inner")?;
            let d = read_map(&map, alg)?;
            let out = match alg {
                Algebra::Witt => recover_inner_witt(&d),
                _ => recover_inner_wplus(&d),
            };
            match out {
                Ok(a) => Ok(render::recovered(format, Ok(&a))),
                Err(Error::NotADerivation(msg)) => Ok(render::recovered(format, Err(&msg))),
                Err(e) => Err(e.into()),
            }
        }
        Command::Centralizer {
            algebra: a,
            element,
            window: w,
        } => {
            let alg = algebra(&a)?;
            let t = Element::parse(alg, &element)?;
            let c = centralizer(alg, &t, window(&w)?)?;
            Ok(render::centralizer(format, &c))
        }
        Command::Rigidity {
            algebra: a,
            element,
            baseline,
            window: w,
        } => {
            let alg = algebra(&a)?;
            require(alg, &[Algebra::Witt, Algebra::PositiveWitt], "rigidity")?;
            let x = Element::parse(alg, &element)?;
            let trace = rigidity_check(alg, &x, window(&w)?)?;
            let predicted = match baseline {
                Some(path) => Some(read_map(&path, alg)?.apply(&x)?),
                None => None,
            };
            Ok(render::rigidity(format, &trace, predicted.as_ref()))
        }
        Command::TwoLocal(args) => match args.command {
            TwoLocalCommand::Verify { pairs } => verify_pairs(format, &pairs),
            TwoLocalCommand::Additivity => {
                let t = |s: &str| Element::parse(Algebra::Thin, s);
                let (x, y) = (t("e_1 + e_2")?, t("-e_1 + e_2")?);
                let report = additivity_violation(thin_delta, &x, &y)?;
                Ok(render::additivity(format, &x, &y, &report))
            }
        },
    }
}

fn verify_pairs(format: Format, path: &str) -> CliResult<String> {
    let doc = read_json(path)?;
    let bad = |m: &str| CliError::Parse(format!("pairs file `{path}`: {m}"));
    let alg = doc
        .get("algebra")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing string field `algebra`"))?;
    if alg != "thin" {
        return Err(CliError::Precondition(format!(
            "pairs file `{path}`: only the thin algebra carries the 2-local map, got `{alg}`"
        )));
    }
    let pairs = doc
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array field `pairs`"))?;
    let mut results = Vec::with_capacity(pairs.len());
    for (n, p) in pairs.iter().enumerate() {
        let texts = p
            .as_array()
            .filter(|p| p.len() == 2)
            .and_then(|p| Some((p[0].as_str()?, p[1].as_str()?)))
            .ok_or_else(|| bad(&format!("entry {n} is not a pair of element strings")))?;
        let x = Element::parse(Algebra::Thin, texts.0)?;
        let y = Element::parse(Algebra::Thin, texts.1)?;
        let cert = thin_witness(&x, &y)?;
        let verdict = verify_pair(thin_delta, &cert)?;
        results.push((cert, verdict));
    }
    Ok(render::pair_reports(format, &results))
}
