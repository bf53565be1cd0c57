//! The line-oriented text formats for categories, factorizations, conjugate
//! categories and diagrams. `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! category <name>
//! objects <n>
//! morphism <id> <dom> <cod>
//! identity <obj> <id>
//! compose <f> <g> <h>        # h = g ∘ f
//! end
//! subcat <name> morphisms <id> <id> ...
//! provenance <bid> <cok> <mid> <img>
//! diagram <name> over <category>
//! space <obj> <dim>
//! matrix <morphism-id> <r> <c>
//! <r lines of c rationals>
//! end
//! ```
//!
//! A matrix with zero columns has no row lines, since they would be blank.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::conjugation::{BMorphism, ConjugateCategory, Factorization};
use crate::diagrams::Diagram;
use crate::fincat::{FinCat, MorId, ObjId, RawCategory, Subcat};
use crate::qlinalg::{QMat, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

struct Line<'a> {
    number: usize,
    words: Vec<&'a str>,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(k, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = content.split_whitespace().collect();
            (!words.is_empty()).then_some(Line { number: k + 1, words })
        })
        .collect()
}

fn number<T: std::str::FromStr>(line: &Line<'_>, word: usize, what: &str) -> Result<T, ParseError> {
    let Some(w) = line.words.get(word) else {
        return err(line.number, format!("missing {what}"));
    };
    w.parse().or_else(|_| err(line.number, format!("bad {what} '{w}'")))
}

fn arity(line: &Line<'_>, n: usize) -> Result<(), ParseError> {
    if line.words.len() != n {
        return err(line.number, format!("'{}' takes {} arguments, found {}", line.words[0], n - 1, line.words.len() - 1));
    }
    Ok(())
}

/// Everything a file may contain, in order of appearance.
#[derive(Debug, Default)]
struct Document {
    categories: Vec<(usize, FinCat)>,
    subcats: Vec<(usize, String, Vec<MorId>)>,
    provenance: Vec<(usize, [usize; 4])>,
    diagrams: Vec<RawDiagram>,
}

/// A diagram as written, before it is attached to a category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDiagram {
    pub line: usize,
    pub name: String,
    pub over: String,
    /// `(object, dim, line)`.
    pub spaces: Vec<(ObjId, usize, usize)>,
    /// `(morphism label, matrix, line)`.
    pub matrices: Vec<(MorId, QMat, usize)>,
}

fn parse_document(text: &str) -> Result<Document, ParseError> {
    let all = lines(text);
    let mut doc = Document::default();
    let mut k = 0;
    while k < all.len() {
        let line = &all[k];
        match line.words[0] {
            "category" => {
                let (cat, next) = parse_category_block(&all, k)?;
                doc.categories.push((line.number, cat));
                k = next;
            }
            "subcat" => {
                if line.words.len() < 3 || line.words[2] != "morphisms" {
                    return err(line.number, "expected 'subcat <name> morphisms <id> ...'");
                }
                let ids = (3..line.words.len()).map(|w| number(line, w, "morphism id")).collect::<Result<_, _>>()?;
                doc.subcats.push((line.number, line.words[1].to_string(), ids));
                k += 1;
            }
            "provenance" => {
                arity(line, 5)?;
                let mut v = [0; 4];
                for (w, slot) in v.iter_mut().enumerate() {
                    *slot = number(line, w + 1, "id")?;
                }
                doc.provenance.push((line.number, v));
                k += 1;
            }
            "diagram" => {
                let (d, next) = parse_diagram_block(&all, k)?;
                doc.diagrams.push(d);
                k = next;
            }
            other => return err(line.number, format!("unexpected '{other}'")),
        }
    }
    Ok(doc)
}

fn parse_category_block(all: &[Line<'_>], start: usize) -> Result<(FinCat, usize), ParseError> {
    let head = &all[start];
    arity(head, 2)?;
    let mut raw = RawCategory { name: head.words[1].to_string(), ..RawCategory::default() };
    let mut objects_seen = false;
    let mut ids = HashSet::new();
    let mut identity_objects = HashSet::new();
    let mut pairs = HashSet::new();
    let mut k = start + 1;
    loop {
        let Some(line) = all.get(k) else {
            return err(head.number, format!("category '{}' has no 'end'", raw.name));
        };
        match line.words[0] {
            "objects" => {
                arity(line, 2)?;
                raw.objects = number(line, 1, "object count")?;
                objects_seen = true;
            }
            "morphism" => {
                arity(line, 4)?;
                let (id, dom, cod): (MorId, ObjId, ObjId) =
                    (number(line, 1, "id")?, number(line, 2, "object")?, number(line, 3, "object")?);
                if !ids.insert(id) {
                    return err(line.number, format!("morphism {id} declared twice"));
                }
                if dom >= raw.objects || cod >= raw.objects {
                    return err(line.number, format!("morphism {id} refers to an object outside 0..{}", raw.objects));
                }
                raw.morphisms.push((id, dom, cod));
            }
            "identity" => {
                arity(line, 3)?;
                let (obj, id): (ObjId, MorId) = (number(line, 1, "object")?, number(line, 2, "id")?);
                if obj >= raw.objects {
                    return err(line.number, format!("identity for object {obj} outside 0..{}", raw.objects));
                }
                if !identity_objects.insert(obj) {
                    return err(line.number, format!("object {obj} has two identities"));
                }
                raw.identities.push((obj, id));
            }
            "compose" => {
                arity(line, 4)?;
                let (f, g, h) = (number(line, 1, "id")?, number(line, 2, "id")?, number(line, 3, "id")?);
                if !pairs.insert((f, g)) {
                    return err(line.number, format!("composite of ({f}, {g}) given twice"));
                }
                raw.compositions.push((f, g, h));
            }
            "end" => {
                arity(line, 1)?;
                if !objects_seen {
                    return err(head.number, "missing 'objects' line");
                }
                let cat = FinCat::from_raw(&raw).or_else(|e| err(line.number, e.to_string()))?;
                return Ok((cat, k + 1));
            }
            other => return err(line.number, format!("unexpected '{other}' inside a category")),
        }
        k += 1;
    }
}

fn parse_diagram_block(all: &[Line<'_>], start: usize) -> Result<(RawDiagram, usize), ParseError> {
    let head = &all[start];
    if head.words.len() != 4 || head.words[2] != "over" {
        return err(head.number, "expected 'diagram <name> over <category>'");
    }
    let mut d = RawDiagram {
        line: head.number,
        name: head.words[1].to_string(),
        over: head.words[3].to_string(),
        spaces: vec![],
        matrices: vec![],
    };
    let mut k = start + 1;
    loop {
        let Some(line) = all.get(k) else {
            return err(head.number, format!("diagram '{}' has no 'end'", d.name));
        };
        match line.words[0] {
            "space" => {
                arity(line, 3)?;
                d.spaces.push((number(line, 1, "object")?, number(line, 2, "dimension")?, line.number));
            }
            "matrix" => {
                arity(line, 4)?;
                let (id, r, c): (MorId, usize, usize) =
                    (number(line, 1, "morphism id")?, number(line, 2, "row count")?, number(line, 3, "column count")?);
                let mut m = QMat::zeros(r, c);
                let row_lines = if c == 0 { 0 } else { r };
                for row in 0..row_lines {
                    let Some(entries) = all.get(k + 1 + row) else {
                        return err(line.number, format!("matrix {id} needs {r} rows"));
                    };
                    if entries.words.len() != c {
                        return err(entries.number, format!("expected {c} entries, found {}", entries.words.len()));
                    }
                    for (col, w) in entries.words.iter().enumerate() {
                        let v: Rat = w.parse().or_else(|_| err(entries.number, format!("bad rational '{w}'")))?;
                        m.set(row, col, v);
                    }
                }
                d.matrices.push((id, m, line.number));
                k += row_lines;
            }
            "end" => {
                arity(line, 1)?;
                return Ok((d, k + 1));
            }
            other => return err(line.number, format!("unexpected '{other}' inside a diagram")),
        }
        k += 1;
    }
}

fn only<T>(items: Vec<(usize, T)>, what: &str) -> Result<T, ParseError> {
    let mut items = items.into_iter();
    match (items.next(), items.next()) {
        (Some((_, t)), None) => Ok(t),
        (None, _) => err(1, format!("no {what} found")),
        (Some(_), Some((line, _))) => err(line, format!("more than one {what}")),
    }
}

pub fn parse_category(text: &str) -> Result<FinCat, ParseError> {
    only(parse_document(text)?.categories, "category")
}

/// A category with the subcategories `I` and `A`.
pub fn parse_factorization(text: &str) -> Result<Factorization, ParseError> {
    let doc = parse_document(text)?;
    let u = only(doc.categories, "category")?;
    let mut i = None;
    let mut a = None;
    for (line, name, ids) in doc.subcats {
        let slot = match name.as_str() {
            "I" => &mut i,
            "A" => &mut a,
            other => return err(line, format!("unknown subcategory '{other}', expected I or A")),
        };
        if slot.is_some() {
            return err(line, format!("subcategory {name} given twice"));
        }
        let sub = Subcat::from_ids(&u, ids).or_else(|id| err(line, format!("morphism {id} is not in the category")))?;
        *slot = Some(sub);
    }
    let (Some(i), Some(a)) = (i, a) else {
        return err(1, "a factorization needs subcategories I and A");
    };
    Ok(Factorization { u, i, a })
}

/// A conjugate category as exported: its table and the canonical triple of
/// every morphism.
pub fn parse_conjugate(text: &str) -> Result<(FinCat, Vec<BMorphism>), ParseError> {
    let doc = parse_document(text)?;
    let b = only(doc.categories, "category")?;
    let mut provenance = vec![None; b.morphism_count()];
    for (line, [bid, cok, mid, img]) in doc.provenance {
        if bid >= b.morphism_count() {
            return err(line, format!("morphism {bid} is not in the category"));
        }
        if provenance[bid].is_some() {
            return err(line, format!("provenance of {bid} given twice"));
        }
        provenance[bid] = Some(BMorphism { src: b.dom(bid), dst: b.cod(bid), cok, mid, img });
    }
    let provenance = provenance
        .into_iter()
        .enumerate()
        .map(|(bid, p)| p.map_or_else(|| err(1, format!("morphism {bid} has no provenance")), Ok))
        .collect::<Result<_, _>>()?;
    Ok((b, provenance))
}

pub fn parse_diagram(text: &str) -> Result<RawDiagram, ParseError> {
    let doc = parse_document(text)?;
    let mut diagrams = doc.diagrams.into_iter().map(|d| (d.line, d)).collect::<Vec<_>>();
    if diagrams.len() > 1 {
        let extra = diagrams.swap_remove(1);
        return err(extra.0, "more than one diagram");
    }
    only(diagrams, "diagram")
}

impl RawDiagram {
    /// Attaches the diagram to `base`. `labels[m]` is the label the file uses
    /// for morphism `m`. Objects without a `space` line have dimension 0,
    /// missing identity matrices are identities and missing matrices between
    /// zero-dimensional spaces are empty.
    pub fn into_diagram(self, base: &Arc<FinCat>, labels: &[MorId]) -> Result<Diagram, ParseError> {
        let mut dims = vec![0; base.object_count()];
        let mut seen = HashSet::new();
        for &(obj, dim, line) in &self.spaces {
            if obj >= base.object_count() {
                return err(line, format!("object {obj} outside 0..{}", base.object_count()));
            }
            if !seen.insert(obj) {
                return err(line, format!("space of object {obj} given twice"));
            }
            dims[obj] = dim;
        }
        let mut mats: Vec<Option<QMat>> = vec![None; base.morphism_count()];
        for (label, m, line) in self.matrices {
            let Some(f) = labels.iter().position(|&l| l == label) else {
                return err(line, format!("morphism {label} is not in {}", base.name()));
            };
            let expected = (dims[base.dom(f)], dims[base.cod(f)]);
            if m.shape() != expected {
                return err(line, format!("matrix of {label} is {:?}, expected {:?}", m.shape(), expected));
            }
            if mats[f].is_some() {
                return err(line, format!("matrix of {label} given twice"));
            }
            mats[f] = Some(m);
        }
        let mats = base
            .morphisms()
            .map(|f| {
                let (r, c) = (dims[base.dom(f)], dims[base.cod(f)]);
                match mats[f].take() {
                    Some(m) => Ok(m),
                    None if base.is_identity(f) => Ok(QMat::identity(r)),
                    None if r == 0 || c == 0 => Ok(QMat::zeros(r, c)),
                    None => err(self.line, format!("missing matrix for morphism {}", labels[f])),
                }
            })
            .collect::<Result<_, _>>()?;
        Diagram::new(base.clone(), dims, mats).or_else(|e| err(self.line, e.to_string()))
    }
}

fn write_category_block(out: &mut String, c: &FinCat) {
    let raw = c.to_raw();
    writeln!(out, "category {}", raw.name).unwrap();
    writeln!(out, "objects {}", raw.objects).unwrap();
    for (id, d, cod) in raw.morphisms {
        writeln!(out, "morphism {id} {d} {cod}").unwrap();
    }
    for (obj, id) in raw.identities {
        writeln!(out, "identity {obj} {id}").unwrap();
    }
    for (f, g, h) in raw.compositions {
        writeln!(out, "compose {f} {g} {h}").unwrap();
    }
    writeln!(out, "end").unwrap();
}

fn write_subcat(out: &mut String, name: &str, s: &Subcat) {
    write!(out, "subcat {name} morphisms").unwrap();
    for id in s.iter() {
        write!(out, " {id}").unwrap();
    }
    writeln!(out).unwrap();
}

pub fn write_category(c: &FinCat) -> String {
    let mut out = String::new();
    write_category_block(&mut out, c);
    out
}

pub fn write_factorization(f: &Factorization) -> String {
    let mut out = String::new();
    write_category_block(&mut out, &f.u);
    write_subcat(&mut out, "I", &f.i);
    write_subcat(&mut out, "A", &f.a);
    out
}

pub fn write_conjugate(cc: &ConjugateCategory) -> String {
    let mut out = String::new();
    write_category_block(&mut out, cc.b());
    for (bid, t) in cc.provenance().iter().enumerate() {
        writeln!(out, "provenance {bid} {} {} {}", t.cok, t.mid, t.img).unwrap();
    }
    out
}

/// Writes every non-identity matrix, labelling morphism `m` as `labels[m]`.
pub fn write_diagram(d: &Diagram, name: &str, labels: &[MorId]) -> String {
    let base = d.base();
    let mut out = String::new();
    writeln!(out, "diagram {name} over {}", base.name()).unwrap();
    for x in base.objects() {
        writeln!(out, "space {x} {}", d.dim(x)).unwrap();
    }
    for f in base.morphisms().filter(|&f| !base.is_identity(f)) {
        let m = d.map(f);
        writeln!(out, "matrix {} {} {}", labels[f], m.rows(), m.cols()).unwrap();
        for r in (0..m.rows()).filter(|_| m.cols() > 0) {
            let row: Vec<String> = m.row(r).iter().map(Rat::to_string).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
    }
    writeln!(out, "end").unwrap();
    out
}
