use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_rational::BigRational;
use qhalg::field::{parse_rational, Field, FieldSpec, PrimeField, Rationals};
use qhalg::format;
use qhalg::lattice::{enumerate_submodules, poset_dot};
use qhalg::matrix::Matrix;
use qhalg::module::Module;
use qhalg::pathbasis::{path_basis, verify_chain_independence, verify_lemma_2_2, verify_theorem_a, ChainRule};
use qhalg::poset::Poset;
use qhalg::presentation::Presentation;
use qhalg::presets::{make_anc, make_auslander, make_example4, make_sl3_block};
use qhalg::qh::QhAlgebra;
use qhalg::ringel::{tilting_end_algebra, verify_ringel_presentation};
use qhalg::tilting::{verify_lemma_3_2, verify_theorem_b, verify_tilting_summand, TiltingKit};
use qhalg::Error;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::output::Outcome;
use crate::{Cli, Command, Family};

type Res<T> = std::result::Result<T, Box<dyn std::error::Error>>;

pub fn run(cli: &Cli) -> Res<Option<Outcome>> {
    if let Command::Family { name, n, c, q, m, factor, output } = &cli.command {
        let mut pres = family(*name, *n, c.as_deref(), q.as_deref(), *m)?;
        if let Some(l) = factor {
            let po = poset_of(&pres)?;
            if !po.contains(*l) {
                return Err(Error::UnknownVertex(*l).into());
            }
            pres = pres.restrict(&po.down(*l))?;
        }
        if let Some(f) = &cli.field {
            pres = pres.with_field(FieldSpec::parse(f)?);
        }
        let text = format::serialize(&pres) + "\n";
        match output {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        return Ok(None);
    }

    let path = cli.input.as_ref().ok_or("--input is required")?;
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let digest = format!("{:x}", Sha256::digest(&bytes));
    let pres = format::parse(std::str::from_utf8(&bytes)?)?;

    let enumerating = matches!(cli.command, Command::Lattice { .. } | Command::TheoremB);
    let spec = match &cli.field {
        Some(f) => FieldSpec::parse(f)?,
        None if enumerating => FieldSpec::PrimeField(2),
        None => pres.field,
    };
    let pres = pres.with_field(spec);
    let mut out = Outcome::new(command_name(&cli.command), digest);
    out.value("field", json!(spec.to_string()));
    match spec {
        FieldSpec::Rationals => dispatch(Rationals, cli, &pres, &mut out)?,
        FieldSpec::PrimeField(p) => dispatch(PrimeField::new(p)?, cli, &pres, &mut out)?,
    }
    Ok(Some(out))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check => "check",
        Command::Basis { .. } => "basis",
        Command::Lattice { .. } => "lattice",
        Command::Tilting { .. } => "tilting",
        Command::TheoremA { .. } => "theorem-a",
        Command::TheoremB => "theorem-b",
        Command::Lemma22 { .. } => "lemma-2-2",
        Command::Lemma32 => "lemma-3-2",
        Command::Ringel { .. } => "ringel",
        Command::Family { .. } => "family",
        Command::Extensions { .. } => "extensions",
    }
}

/// Errors that mean a verified statement is false for this input, as
/// opposed to bad data.
fn refutes(e: &Error) -> bool {
    matches!(
        e,
        Error::ZeroPath(..)
            | Error::BasisFailure(..)
            | Error::FactorNotOneQH(_)
            | Error::NotLocal(_)
            | Error::ArrowChoiceFailed(_)
            | Error::NotComparable(..)
            | Error::SequenceNotAdmissible
            | Error::Undecided
    )
}

fn verdict(out: &mut Outcome, prefix: &str, r: qhalg::Result<qhalg::report::Report>) -> Res<()> {
    match r {
        Ok(rep) => out.extend(prefix, rep),
        Err(e) if refutes(&e) => out.check(prefix, false, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn poset_of(pres: &Presentation) -> qhalg::Result<Poset> {
    Poset::new(pres.quiver.vertices().to_vec(), &pres.order)
}

fn write_dot(cli: &Cli, text: &str) -> Res<()> {
    if let Some(p) = &cli.dot {
        fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(())
}

fn vertices_or(a: &[u32], v: Option<u32>) -> Res<Vec<u32>> {
    match v {
        Some(v) if a.contains(&v) => Ok(vec![v]),
        Some(v) => Err(Error::UnknownVertex(v).into()),
        None => Ok(a.to_vec()),
    }
}

fn dispatch<F: Field>(field: F, cli: &Cli, pres: &Presentation, out: &mut Outcome) -> Res<()> {
    if let Command::Extensions { from } = &cli.command {
        let po = poset_of(pres)?;
        if let Some(k) = from {
            if !po.contains(*k) {
                return Err(Error::UnknownVertex(*k).into());
            }
        }
        let ext = po.linear_extensions(*from);
        for e in &ext {
            out.line(e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
        }
        out.value("count", json!(ext.len()));
        out.value("extensions", json!(ext));
        return write_dot(cli, &poset_dot(&po));
    }

    let a = QhAlgebra::from_presentation(field, pres)?;
    out.value("dim", json!(a.alg.dim()));
    let verts = a.vertices().to_vec();

    match &cli.command {
        Command::Check => {
            out.extend("quasi-hereditary", a.check_quasi_hereditary());
            let rep = a.check_one_quasi_hereditary();
            for ax in &rep.axioms {
                let witness = (!ax.failures.is_empty()).then(|| ax.failures.join("; "));
                out.check(format!("axiom ({})", ax.axiom), ax.passed, witness);
            }
            let mut pdims = BTreeMap::new();
            for &i in &verts {
                pdims.insert(format!("P({i})"), a.projective(i)?.dims().to_vec());
            }
            out.value("projective_dims", json!(pdims));
            write_dot(cli, &poset_dot(&a.poset))?;
        }
        Command::Basis { vertex } => {
            let mut all = BTreeMap::new();
            for j in vertices_or(&verts, *vertex)? {
                match path_basis(&a, j, ChainRule::default()) {
                    Ok(b) => {
                        let dim = a.projective(j)?.dim();
                        let mut listed = Vec::new();
                        for p in b.iter() {
                            let word = p.vertices().iter().map(|v| v.to_string()).collect::<String>();
                            out.line(format!("p({j},{},{}) = ({word})", p.i, p.k));
                            listed.push(json!({"i": p.i, "k": p.k, "path": p.vertices()}));
                        }
                        out.check(
                            format!("P({j}): {} paths for dimension {dim}", b.len()),
                            b.len() == dim,
                            None,
                        );
                        all.insert(format!("P({j})"), listed);
                    }
                    Err(e) if refutes(&e) => out.check(format!("P({j})"), false, Some(e.to_string())),
                    Err(e) => return Err(e.into()),
                }
            }
            out.value("bases", json!(all));
        }
        Command::Lattice { module } => {
            let (label, m) = module_spec(&a, module)?;
            let lat = enumerate_submodules(&m, cli.budget)?;
            let chains = lat.maximal_chains();
            out.line(format!("{label}: dimension {}", m.dim()));
            out.line(format!("{} submodules", lat.len()));
            out.line(format!("{} maximal chains", chains));
            out.value("module", json!(label));
            out.value("submodules", json!(lat.len()));
            out.value("covers", json!(lat.covers.len()));
            out.value("maximal_chains", json!(chains.to_string()));
            write_dot(cli, &lat.to_dot())?;
        }
        Command::Tilting { vertex } => {
            let kit = match TiltingKit::new(&a) {
                Ok(k) => k,
                Err(e) if refutes(&e) => {
                    out.check("tilting generators", false, Some(e.to_string()));
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
            let mut gens = BTreeMap::new();
            for i in vertices_or(&verts, *vertex)? {
                let g = a.alg.format_elem(&kit.generators[&i]);
                out.line(format!("t({i}) = {g}"));
                gens.insert(format!("T({i})"), g);
                out.extend(&format!("T({i})"), verify_tilting_summand(&a, &kit.summand(i)?, i));
            }
            out.value("generators", json!(gens));
        }
        Command::TheoremA { vertex } => {
            for j in vertices_or(&verts, *vertex)? {
                verdict(out, &format!("P({j})"), verify_theorem_a(&a, j))?;
                verdict(out, &format!("P({j}) chains"), verify_chain_independence(&a, j))?;
            }
        }
        Command::Lemma22 { vertex } => {
            for j in vertices_or(&verts, *vertex)? {
                verdict(out, &format!("P({j})"), verify_lemma_2_2(&a, j))?;
            }
        }
        Command::TheoremB | Command::Lemma32 => {
            let kit = match TiltingKit::new(&a) {
                Ok(k) => k,
                Err(e) if refutes(&e) => {
                    out.check("tilting generators", false, Some(e.to_string()));
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
            if matches!(cli.command, Command::TheoremB) {
                verdict(out, "", verify_theorem_b(&a, &kit))?;
            } else {
                verdict(out, "", verify_lemma_3_2(&a, &kit))?;
            }
        }
        Command::Ringel { against, map } => {
            let candidate = read_presentation(against)?;
            let vmap = vertex_map(&a, &candidate, map.as_deref())?;
            let kit = match TiltingKit::new(&a) {
                Ok(k) => k,
                Err(e) if refutes(&e) => {
                    out.check("tilting generators", false, Some(e.to_string()));
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
            let end = tilting_end_algebra(&a, &kit)?;
            out.value("end_dim", json!(end.dim()));
            out.value(
                "vertex_map",
                json!(vmap.iter().map(|(v, &s)| (v.to_string(), verts[s])).collect::<BTreeMap<_, _>>()),
            );
            verdict(out, "", verify_ringel_presentation(&end, &candidate, &vmap))?;
        }
        Command::Family { .. } | Command::Extensions { .. } => unreachable!(),
    }
    Ok(())
}

fn read_presentation(p: &Path) -> Res<Presentation> {
    let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
    Ok(format::parse(&text)?)
}

fn module_spec<F: Field>(a: &QhAlgebra<F>, s: &str) -> Res<(String, Module<F>)> {
    let (kind, v) = s.split_once(':').ok_or_else(|| format!("module `{s}` is not KIND:VERTEX"))?;
    let v: u32 = v.trim().parse().map_err(|_| format!("bad vertex in `{s}`"))?;
    if !a.vertices().contains(&v) {
        return Err(Error::UnknownVertex(v).into());
    }
    let (name, m) = match kind.trim() {
        "P" => ("P", a.projective(v)?),
        "I" => ("I", a.injective(v)?),
        "S" => ("S", a.simple(v)?),
        "D" | "Delta" => ("Delta", a.delta(v)?),
        "N" | "Nabla" => ("Nabla", a.nabla(v)?),
        k => return Err(format!("unknown module kind `{k}`").into()),
    };
    Ok((format!("{name}({v})"), m))
}

/// Candidate vertex to summand index. `spec` reads "1=4,4=1"; vertices not
/// named map to themselves.
fn vertex_map<F: Field>(a: &QhAlgebra<F>, cand: &Presentation, spec: Option<&str>) -> Res<BTreeMap<u32, usize>> {
    let verts = a.vertices();
    let index = |v: u32| verts.iter().position(|&w| w == v).ok_or(Error::UnknownVertex(v));
    let mut image: BTreeMap<u32, u32> = cand.quiver.vertices().iter().map(|&v| (v, v)).collect();
    match spec {
        Some(s) => {
            for part in s.split(',').filter(|p| !p.trim().is_empty()) {
                let (l, r) = part.split_once('=').ok_or_else(|| format!("bad map entry `{part}`"))?;
                let l: u32 = l.trim().parse().map_err(|_| format!("bad map entry `{part}`"))?;
                let r: u32 = r.trim().parse().map_err(|_| format!("bad map entry `{part}`"))?;
                if !image.contains_key(&l) {
                    return Err(Error::UnknownVertex(l).into());
                }
                image.insert(l, r);
            }
        }
        None => {
            let po = poset_of(cand)?;
            let (lo, hi) = (po.unique_min(), po.unique_max());
            let (amin, amax) = (a.min_vertex(), a.max_vertex());
            if let (Some(lo), Some(hi), Some(amin), Some(amax)) = (lo, hi, amin, amax) {
                image.insert(lo, amax);
                image.insert(hi, amin);
            }
        }
    }
    let mut out = BTreeMap::new();
    for (v, w) in image {
        out.insert(v, index(w)?);
    }
    Ok(out)
}

fn family(name: Family, n: Option<usize>, c: Option<&str>, q: Option<&str>, m: Option<usize>) -> Res<Presentation> {
    Ok(match name {
        Family::AnC => {
            let n = n.ok_or("an-c needs --n")?;
            let c = match c {
                Some(s) => parse_matrix(s)?,
                None => identity(n.saturating_sub(2)),
            };
            make_anc(n, &c)?
        }
        Family::Sl3 => make_sl3_block()?,
        Family::Example4 => make_example4(&parse_rational(q.unwrap_or("0"))?)?,
        Family::Auslander => make_auslander(m.ok_or("auslander needs --m")?)?,
    })
}

fn identity(k: usize) -> Matrix<BigRational> {
    let rows: Vec<Vec<BigRational>> = (0..k)
        .map(|r| (0..k).map(|c| BigRational::from_integer((r == c).into())).collect())
        .collect();
    Matrix::from_rows(k, &rows)
}

fn parse_matrix(s: &str) -> Res<Matrix<BigRational>> {
    let rows = s
        .split(';')
        .map(|r| r.split(',').map(parse_rational).collect::<qhalg::Result<Vec<_>>>())
        .collect::<qhalg::Result<Vec<_>>>()?;
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err(format!("ragged matrix `{s}`").into());
    }
    Ok(Matrix::from_rows(cols, &rows))
}
