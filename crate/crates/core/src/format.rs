//! The line-based document format.
//!
//! A document is a sequence of sections `[kind name]`, each followed by
//! lines `keyword ints... : ints...` or `keyword name`. `#` starts a
//! comment. Sections reference each other by name; names are unique per
//! kind. The canonical form orders sections by kind then name and table
//! lines by keyword then by their integers.
//!
//! ```text
//! [group Z2]
//! order 2
//! 0 1
//! 1 0
//!
//! [xmod h_z2]
//! g one
//! h Z2
//! rho: 0
//! act 0: 0
//! act 1: 0
//!
//! [cover circ3]
//! base 3
//! set 0: 0 1
//! ```
//!
//! Extension sections give the base either as `cover C` (the discrete base
//! of `C`, with `M = ⊔U_i` in Čech object order) or as `over B` plus
//! `q: ...`. Base arrow indices in `phi` lines follow the pull-back groupoid
//! `B[q]`; morita `phir`/`phip` lines index the two pull-backs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::cech::{pullback_groupoid, Cover, FiniteGroupoid};
use crate::cocycle::{Coboundary, Cocycle};
use crate::error::{Error, Result};
use crate::extension::{BundleParts, ExtIso, GHExtension};
use crate::fingroup::FiniteGroup;
use crate::morita::{validate_morita_witness, BaseMorita, ExtOverBase, MoritaWitness};
use crate::xmod::CrossedModule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Group,
    Xmod,
    Cover,
    Groupoid,
    Cocycle,
    Coboundary,
    Extension,
    Morita,
    BaseMorita,
}

impl Kind {
    pub fn word(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Xmod => "xmod",
            Kind::Cover => "cover",
            Kind::Groupoid => "groupoid",
            Kind::Cocycle => "cocycle",
            Kind::Coboundary => "coboundary",
            Kind::Extension => "extension",
            Kind::Morita => "morita",
            Kind::BaseMorita => "basemorita",
        }
    }

    fn from_word(w: &str) -> Option<Kind> {
        [
            Kind::Group,
            Kind::Xmod,
            Kind::Cover,
            Kind::Groupoid,
            Kind::Cocycle,
            Kind::Coboundary,
            Kind::Extension,
            Kind::Morita,
            Kind::BaseMorita,
        ]
        .into_iter()
        .find(|k| k.word() == w)
    }
}

/// Where an extension's base comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseRef {
    Cover(String),
    Groupoid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Item {
    Group(Arc<FiniteGroup>),
    Xmod {
        g: String,
        h: String,
        cm: Arc<CrossedModule>,
    },
    Cover(Arc<Cover>),
    Groupoid(Arc<FiniteGroupoid>),
    Cocycle {
        xmod: String,
        cover: String,
        cocycle: Cocycle,
    },
    Coboundary {
        xmod: String,
        cover: String,
        coboundary: Coboundary,
    },
    Extension {
        xmod: String,
        base: BaseRef,
        ext: ExtOverBase,
    },
    Morita {
        from: String,
        to: String,
        witness: MoritaWitness,
    },
    BaseMorita {
        from: String,
        to: String,
        morita: BaseMorita,
    },
}

impl Item {
    pub fn kind(&self) -> Kind {
        match self {
            Item::Group(_) => Kind::Group,
            Item::Xmod { .. } => Kind::Xmod,
            Item::Cover(_) => Kind::Cover,
            Item::Groupoid(_) => Kind::Groupoid,
            Item::Cocycle { .. } => Kind::Cocycle,
            Item::Coboundary { .. } => Kind::Coboundary,
            Item::Extension { .. } => Kind::Extension,
            Item::Morita { .. } => Kind::Morita,
            Item::BaseMorita { .. } => Kind::BaseMorita,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    items: BTreeMap<(Kind, String), Item>,
}

struct Line {
    no: usize,
    key: String,
    rest: String,
}

impl Line {
    fn perr(&self, reason: impl Into<String>) -> Error {
        Error::ParseError {
            line: self.no,
            reason: reason.into(),
        }
    }

    fn name(&self) -> Result<String> {
        let n = self.rest.trim();
        if valid_name(n) {
            Ok(n.to_string())
        } else {
            Err(self.perr(format!("expected a name after {}", self.key)))
        }
    }

    /// Integers before and after the colon.
    fn ints(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let parse = |s: &str| -> Result<Vec<usize>> {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| self.perr(format!("bad integer {t:?}")))
                })
                .collect()
        };
        match self.rest.split_once(':') {
            Some((a, b)) => Ok((parse(a)?, parse(b)?)),
            None => Ok((parse(&self.rest)?, Vec::new())),
        }
    }

    fn indexed(&self, n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let (a, b) = self.ints()?;
        if a.len() != n || !self.rest.contains(':') {
            return Err(self.perr(format!("{} expects {n} indices before ':'", self.key)));
        }
        Ok((a, b))
    }

    fn single(&self) -> Result<usize> {
        match self.ints()? {
            (a, b) if a.len() == 1 && b.is_empty() && !self.rest.contains(':') => Ok(a[0]),
            _ => Err(self.perr(format!("{} expects one integer", self.key))),
        }
    }

    fn list(&self) -> Result<Vec<usize>> {
        match self.ints()? {
            (a, b) if a.is_empty() && self.rest.contains(':') => Ok(b),
            _ => Err(self.perr(format!("{} expects ': values'", self.key))),
        }
    }
}

fn valid_name(n: &str) -> bool {
    !n.is_empty()
        && n.chars()
            .all(|c| c.is_ascii_alphanumeric() || "_.-".contains(c))
}

struct RawSection {
    kind: Kind,
    name: String,
    no: usize,
    lines: Vec<Line>,
}

impl RawSection {
    fn perr(&self, reason: impl Into<String>) -> Error {
        Error::ParseError {
            line: self.no,
            reason: reason.into(),
        }
    }

    fn one(&self, key: &str) -> Result<&Line> {
        let mut it = self.lines.iter().filter(|l| l.key == key);
        match (it.next(), it.next()) {
            (Some(l), None) => Ok(l),
            (None, _) => Err(self.perr(format!("missing {key} line"))),
            (Some(_), Some(l)) => Err(l.perr(format!("repeated {key} line"))),
        }
    }

    fn maybe(&self, key: &str) -> Result<Option<&Line>> {
        if self.lines.iter().any(|l| l.key == key) {
            self.one(key).map(Some)
        } else {
            Ok(None)
        }
    }

    fn all(&self, key: &str) -> impl Iterator<Item = &Line> {
        let key = key.to_string();
        self.lines.iter().filter(move |l| l.key == key)
    }

    fn only(&self, keys: &[&str]) -> Result<()> {
        match self.lines.iter().find(|l| !keys.contains(&l.key.as_str())) {
            Some(l) => Err(l.perr(format!(
                "unexpected {} line in {} section",
                l.key,
                self.kind.word()
            ))),
            None => Ok(()),
        }
    }
}

/// Reads one table keyed by index tuples, rejecting duplicates.
fn table(sec: &RawSection, key: &str, n: usize) -> Result<BTreeMap<Vec<usize>, Vec<usize>>> {
    let mut out = BTreeMap::new();
    for l in sec.all(key) {
        let (k, v) = l.indexed(n)?;
        if out.insert(k.clone(), v).is_some() {
            return Err(l.perr(format!("repeated {key} {k:?}")));
        }
    }
    Ok(out)
}

/// Reads `key i...: v` lines with single values into a map.
fn scalar_table(sec: &RawSection, key: &str, n: usize) -> Result<BTreeMap<Vec<usize>, usize>> {
    let mut out = BTreeMap::new();
    for l in sec.all(key) {
        let (k, v) = l.indexed(n)?;
        if v.len() != 1 {
            return Err(l.perr(format!("{key} expects one value")));
        }
        if out.insert(k.clone(), v[0]).is_some() {
            return Err(l.perr(format!("repeated {key} {k:?}")));
        }
    }
    Ok(out)
}

/// A dense vector from `key i: v` lines, every index present.
fn dense(sec: &RawSection, key: &str, len: usize) -> Result<Vec<usize>> {
    let t = scalar_table(sec, key, 1)?;
    (0..len)
        .map(|i| {
            t.get(&vec![i])
                .copied()
                .ok_or_else(|| sec.perr(format!("missing {key} {i}")))
        })
        .collect()
}

fn in_section<T>(kind: Kind, name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        e @ Error::InSection { .. } => e,
        e => Error::InSection {
            kind: kind.word().into(),
            name: name.into(),
            source: Box::new(e),
        },
    })
}

impl Document {
    pub fn new() -> Document {
        Document::default()
    }

    pub fn parse(text: &str) -> Result<Document> {
        let mut raws: Vec<RawSection> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('[') {
                let h = h.strip_suffix(']').ok_or(Error::ParseError {
                    line: no,
                    reason: "unclosed header".into(),
                })?;
                let mut parts = h.split_whitespace();
                let (kw, name) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
                let kind = Kind::from_word(kw).ok_or_else(|| Error::ParseError {
                    line: no,
                    reason: format!("unknown section kind {kw:?}"),
                })?;
                if !valid_name(name) || parts.next().is_some() {
                    return Err(Error::ParseError {
                        line: no,
                        reason: "header must be [kind name]".into(),
                    });
                }
                raws.push(RawSection {
                    kind,
                    name: name.into(),
                    no,
                    lines: Vec::new(),
                });
                continue;
            }
            let sec = raws.last_mut().ok_or(Error::ParseError {
                line: no,
                reason: "content before the first section".into(),
            })?;
            let (key, rest) = match line.find(|c: char| c.is_whitespace() || c == ':') {
                Some(i) => (&line[..i], &line[i..]),
                None => (line, ""),
            };
            sec.lines.push(Line {
                no,
                key: key.into(),
                rest: rest.into(),
            });
        }
        raws.sort_by_key(|r| r.kind);
        let mut doc = Document::new();
        for r in &raws {
            if doc.items.contains_key(&(r.kind, r.name.clone())) {
                return Err(r.perr(format!("duplicate {} {}", r.kind.word(), r.name)));
            }
            let item = in_section(r.kind, &r.name, doc.build(r))?;
            doc.items.insert((r.kind, r.name.clone()), item);
        }
        Ok(doc)
    }

    fn build(&self, s: &RawSection) -> Result<Item> {
        match s.kind {
            Kind::Group => {
                let is_row = |l: &&Line| l.key.parse::<usize>().is_ok();
                if let Some(l) = s.lines.iter().find(|l| l.key != "order" && !is_row(l)) {
                    return Err(l.perr(format!("unexpected {} line in group section", l.key)));
                }
                let n = s.one("order")?.single()?;
                let rows: Vec<&Line> = s.lines.iter().filter(is_row).collect();
                let at = rows.first().map_or(s.no, |l| l.no);
                let t = rows
                    .iter()
                    .map(|l| {
                        format!("{} {}", l.key, l.rest)
                            .split_whitespace()
                            .map(|t| {
                                t.parse::<usize>()
                                    .map_err(|_| l.perr(format!("bad integer {t:?}")))
                            })
                            .collect::<Result<Vec<usize>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if t.len() != n || t.iter().any(|r| r.len() != n) {
                    return Err(Error::ParseError {
                        line: at,
                        reason: format!("expected {n} rows of {n} entries"),
                    });
                }
                Ok(Item::Group(Arc::new(FiniteGroup::from_table(&s.name, t)?)))
            }
            Kind::Xmod => {
                s.only(&["g", "h", "rho", "act"])?;
                let (gn, hn) = (s.one("g")?.name()?, s.one("h")?.name()?);
                let (g, h) = (self.group(&gn)?.clone(), self.group(&hn)?.clone());
                let rho = s.one("rho")?.list()?;
                let acts = table(s, "act", 1)?;
                let act = (0..h.order())
                    .map(|i| {
                        acts.get(&vec![i])
                            .cloned()
                            .ok_or_else(|| s.perr(format!("missing act {i}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if acts.len() != h.order() {
                    return Err(s.perr("act index out of range"));
                }
                Ok(Item::Xmod {
                    g: gn,
                    h: hn,
                    cm: Arc::new(CrossedModule::new(g, h, rho, act)?),
                })
            }
            Kind::Cover => {
                s.only(&["base", "set"])?;
                let n = s.one("base")?.single()?;
                let sets = table(s, "set", 1)?;
                let count = sets.keys().map(|k| k[0] + 1).max().unwrap_or(0);
                let sets = (0..count)
                    .map(|i| sets.get(&vec![i]).cloned().unwrap_or_default())
                    .collect();
                Ok(Item::Cover(Arc::new(Cover::new(n, sets)?)))
            }
            Kind::Groupoid => {
                s.only(&["objects", "arrow", "prod"])?;
                let n = s.one("objects")?.single()?;
                let arrows = table(s, "arrow", 1)?;
                let ends = (0..arrows.len())
                    .map(|a| match arrows.get(&vec![a]) {
                        Some(v) if v.len() == 2 => Ok((v[0], v[1])),
                        _ => Err(s.perr(format!("arrow {a} missing or malformed"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let prod = scalar_table(s, "prod", 2)?;
                let prod: HashMap<(usize, usize), usize> =
                    prod.into_iter().map(|(k, v)| ((k[0], k[1]), v)).collect();
                let g = FiniteGroupoid::from_table(
                    n,
                    ends.iter().map(|e| e.0).collect(),
                    ends.iter().map(|e| e.1).collect(),
                    &prod,
                )?;
                Ok(Item::Groupoid(Arc::new(g)))
            }
            Kind::Cocycle | Kind::Coboundary => self.build_cochain(s),
            Kind::Extension => self.build_extension(s),
            Kind::Morita => {
                s.only(&["from", "to", "p", "p2", "phir", "phip"])?;
                let (from, to) = (s.one("from")?.name()?, s.one("to")?.name()?);
                let (e1, e2) = (self.extension(&from)?, self.extension(&to)?);
                let (p, p2) = (s.one("p")?.list()?, s.one("p2")?.list()?);
                let nr = scalar_table(s, "phir", 1)?.len();
                let np = scalar_table(s, "phip", 1)?.len();
                let iso = ExtIso {
                    phi_r: dense(s, "phir", nr)?,
                    phi_p: dense(s, "phip", np)?,
                };
                let witness = MoritaWitness { p, p2, iso };
                validate_morita_witness(e1, e2, &witness)?;
                Ok(Item::Morita { from, to, witness })
            }
            Kind::BaseMorita => {
                s.only(&["from", "to", "f", "g", "phi"])?;
                let (from, to) = (s.one("from")?.name()?, s.one("to")?.name()?);
                let (b1, b2) = (self.groupoid(&from)?, self.groupoid(&to)?);
                let (f, g) = (s.one("f")?.list()?, s.one("g")?.list()?);
                let n = scalar_table(s, "phi", 1)?.len();
                let morita = BaseMorita {
                    f,
                    g,
                    phi: dense(s, "phi", n)?,
                };
                morita.validate(b1, b2)?;
                Ok(Item::BaseMorita { from, to, morita })
            }
        }
    }

    fn build_cochain(&self, s: &RawSection) -> Result<Item> {
        let cocycle = s.kind == Kind::Cocycle;
        let (k1, k2) = if cocycle { ("lam", "g") } else { ("r", "v") };
        s.only(&["xmod", "cover", k1, k2])?;
        let (xn, cn) = (s.one("xmod")?.name()?, s.one("cover")?.name()?);
        let (cm, cov) = (self.xmod(&xn)?.clone(), self.cover(&cn)?.clone());
        let (n1, n2) = if cocycle { (3, 4) } else { (2, 3) };
        let index1 = |k: &[usize]| {
            if cocycle {
                cov.pair_index(k[0], k[1], k[2])
            } else {
                cov.object_index(k[0], k[1])
            }
        };
        let index2 = |k: &[usize]| {
            if cocycle {
                cov.triple_index(k[0], k[1], k[2], k[3])
            } else {
                cov.pair_index(k[0], k[1], k[2])
            }
        };
        let len1 = if cocycle {
            cov.n_pairs()
        } else {
            cov.n_objects()
        };
        let len2 = if cocycle {
            cov.n_triples()
        } else {
            cov.n_pairs()
        };
        let fill = |key: &str,
                    n: usize,
                    len: usize,
                    index: &dyn Fn(&[usize]) -> Option<usize>|
         -> Result<Vec<usize>> {
            let mut out = vec![usize::MAX; len];
            for (k, v) in scalar_table(s, key, n)? {
                let at = index(&k)
                    .ok_or_else(|| s.perr(format!("{key} {k:?} is not a point of the cover")))?;
                out[at] = v;
            }
            if out.contains(&usize::MAX) {
                return Err(s.perr(format!("{key} table is incomplete")));
            }
            Ok(out)
        };
        let t1 = fill(k1, n1, len1, &index1)?;
        let t2 = fill(k2, n2, len2, &index2)?;
        if cocycle {
            let c = Cocycle::from_tables(cm, cov, t1, t2)?;
            c.validate()?;
            Ok(Item::Cocycle {
                xmod: xn,
                cover: cn,
                cocycle: c,
            })
        } else {
            let cb = Coboundary::from_tables(cm, cov, t1, t2)?;
            Ok(Item::Coboundary {
                xmod: xn,
                cover: cn,
                coboundary: cb,
            })
        }
    }

    fn build_extension(&self, s: &RawSection) -> Result<Item> {
        s.only(&[
            "xmod", "cover", "over", "q", "arrow", "phi", "prod", "elem", "hact", "gact", "chi",
        ])?;
        let xn = s.one("xmod")?.name()?;
        let cm = self.xmod(&xn)?.clone();
        let (base_ref, b, q) = match (s.maybe("cover")?, s.maybe("over")?) {
            (Some(l), None) => {
                let n = l.name()?;
                let cov = self.cover(&n)?;
                if s.maybe("q")?.is_some() {
                    return Err(s.perr("q is implied by cover"));
                }
                (
                    BaseRef::Cover(n),
                    Arc::new(FiniteGroupoid::trivial(cov.base_size())),
                    cov.inclusion(),
                )
            }
            (None, Some(l)) => {
                let n = l.name()?;
                (
                    BaseRef::Groupoid(n.clone()),
                    self.groupoid(&n)?.clone(),
                    s.one("q")?.list()?,
                )
            }
            _ => return Err(s.perr("extension needs exactly one of cover or over")),
        };
        let bq = Arc::new(pullback_groupoid(&b, &q)?);
        let arrows = table(s, "arrow", 1)?;
        let na = arrows.len();
        let ends = (0..na)
            .map(|a| match arrows.get(&vec![a]) {
                Some(v) if v.len() == 2 => Ok((v[0], v[1])),
                _ => Err(s.perr(format!("arrow {a} missing or malformed"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let prod: HashMap<(usize, usize), usize> = scalar_table(s, "prod", 2)?
            .into_iter()
            .map(|(k, v)| ((k[0], k[1]), v))
            .collect();
        let r = FiniteGroupoid::from_table(
            q.len(),
            ends.iter().map(|e| e.0).collect(),
            ends.iter().map(|e| e.1).collect(),
            &prod,
        )?;
        let phi = dense(s, "phi", na)?;
        let ne = scalar_table(s, "elem", 1)?.len();
        let proj = dense(s, "elem", ne)?;
        let hacts = table(s, "hact", 2)?;
        let nh = cm.h().order();
        let hact = (0..ne)
            .map(|p| {
                (0..nh)
                    .map(|h| match hacts.get(&vec![p, h]).map(|v| v.as_slice()) {
                        Some([v]) => Ok(*v),
                        _ => Err(s.perr(format!("missing hact {p} {h}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let gact = scalar_table(s, "gact", 2)?;
        let chis = table(s, "chi", 1)?;
        let chi = (0..ne)
            .map(|p| {
                chis.get(&vec![p])
                    .cloned()
                    .ok_or_else(|| s.perr(format!("missing chi {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let bundle = BundleParts {
            labels: (0..ne).map(|p| vec![p]).collect(),
            proj,
            hact,
        };
        let e = GHExtension::new(
            cm,
            bq,
            r,
            phi,
            bundle,
            |a, p| gact.get(&vec![a, p]).copied(),
            chi,
        )?;
        Ok(Item::Extension {
            xmod: xn,
            base: base_ref,
            ext: ExtOverBase::new(b, q, e)?,
        })
    }

    fn get(&self, kind: Kind, name: &str) -> Result<&Item> {
        self.items
            .get(&(kind, name.to_string()))
            .ok_or_else(|| Error::UnresolvedReference {
                kind: kind.word().into(),
                name: name.into(),
            })
    }

    pub fn item(&self, kind: Kind, name: &str) -> Result<&Item> {
        self.get(kind, name)
    }

    pub fn group(&self, name: &str) -> Result<&Arc<FiniteGroup>> {
        match self.get(Kind::Group, name)? {
            Item::Group(g) => Ok(g),
            _ => unreachable!(),
        }
    }

    pub fn xmod(&self, name: &str) -> Result<&Arc<CrossedModule>> {
        match self.get(Kind::Xmod, name)? {
            Item::Xmod { cm, .. } => Ok(cm),
            _ => unreachable!(),
        }
    }

    pub fn cover(&self, name: &str) -> Result<&Arc<Cover>> {
        match self.get(Kind::Cover, name)? {
            Item::Cover(c) => Ok(c),
            _ => unreachable!(),
        }
    }

    pub fn groupoid(&self, name: &str) -> Result<&Arc<FiniteGroupoid>> {
        match self.get(Kind::Groupoid, name)? {
            Item::Groupoid(g) => Ok(g),
            _ => unreachable!(),
        }
    }

    pub fn cocycle(&self, name: &str) -> Result<&Cocycle> {
        match self.get(Kind::Cocycle, name)? {
            Item::Cocycle { cocycle, .. } => Ok(cocycle),
            _ => unreachable!(),
        }
    }

    pub fn extension(&self, name: &str) -> Result<&ExtOverBase> {
        match self.get(Kind::Extension, name)? {
            Item::Extension { ext, .. } => Ok(ext),
            _ => unreachable!(),
        }
    }

    pub fn items(&self) -> impl Iterator<Item = (Kind, &str, &Item)> {
        self.items.iter().map(|((k, n), i)| (*k, n.as_str(), i))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Adds or replaces a section. References are not checked here; they
    /// are resolved when the serialized text is parsed again.
    pub fn insert(&mut self, name: &str, item: Item) {
        self.items.insert((item.kind(), name.to_string()), item);
    }

    /// The named section and every section it depends on.
    pub fn closure(&self, kind: Kind, name: &str) -> Result<Document> {
        let mut out = Document::new();
        self.collect(kind, name, &mut out)?;
        Ok(out)
    }

    fn collect(&self, kind: Kind, name: &str, out: &mut Document) -> Result<()> {
        let item = self.get(kind, name)?;
        let deps: Vec<(Kind, &str)> = match item {
            Item::Group(_) | Item::Cover(_) | Item::Groupoid(_) => vec![],
            Item::Xmod { g, h, .. } => vec![(Kind::Group, g), (Kind::Group, h)],
            Item::Cocycle { xmod, cover, .. } | Item::Coboundary { xmod, cover, .. } => {
                vec![(Kind::Xmod, xmod), (Kind::Cover, cover)]
            }
            Item::Extension { xmod, base, .. } => match base {
                BaseRef::Cover(c) => vec![(Kind::Xmod, xmod), (Kind::Cover, c)],
                BaseRef::Groupoid(b) => vec![(Kind::Xmod, xmod), (Kind::Groupoid, b)],
            },
            Item::Morita { from, to, .. } => vec![(Kind::Extension, from), (Kind::Extension, to)],
            Item::BaseMorita { from, to, .. } => vec![(Kind::Groupoid, from), (Kind::Groupoid, to)],
        };
        for (k, n) in deps {
            self.collect(k, n, out)?;
        }
        out.insert(name, item.clone());
        Ok(())
    }

    /// The canonical text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, ((kind, name), item)) in self.items.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "[{} {}]", kind.word(), name);
            write_item(&mut out, item);
        }
        out
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `key a b: c d` followed by a newline, tolerating an empty value list.
fn entry(out: &mut String, key: &str, idx: &[usize], vals: &[usize]) {
    let head = if idx.is_empty() {
        key.to_string()
    } else {
        format!("{key} {}", join(idx))
    };
    if vals.is_empty() {
        let _ = writeln!(out, "{head}:");
    } else {
        let _ = writeln!(out, "{head}: {}", join(vals));
    }
}

/// Indexed lines sorted by their index tuples.
fn sorted_entries(out: &mut String, key: &str, mut rows: Vec<(Vec<usize>, Vec<usize>)>) {
    rows.sort();
    for (k, v) in rows {
        entry(out, key, &k, &v);
    }
}

fn write_item(out: &mut String, item: &Item) {
    match item {
        Item::Group(g) => {
            let _ = writeln!(out, "order {}", g.order());
            for row in g.rows() {
                let _ = writeln!(out, "{}", join(row));
            }
        }
        Item::Xmod { g, h, cm } => {
            let _ = writeln!(out, "g {g}\nh {h}");
            entry(out, "rho", &[], cm.rho_table());
            for (i, row) in cm.act_table().iter().enumerate() {
                entry(out, "act", &[i], row);
            }
        }
        Item::Cover(c) => {
            let _ = writeln!(out, "base {}", c.base_size());
            for (i, s) in c.sets().iter().enumerate() {
                entry(out, "set", &[i], s);
            }
        }
        Item::Groupoid(g) => {
            let _ = writeln!(out, "objects {}", g.n_objects());
            for a in 0..g.n_arrows() {
                entry(out, "arrow", &[a], &[g.src(a), g.tgt(a)]);
            }
            let rows = g
                .composable_pairs()
                .map(|(a, b)| (vec![a, b], vec![g.mul(a, b)]))
                .collect();
            sorted_entries(out, "prod", rows);
        }
        Item::Cocycle {
            xmod,
            cover,
            cocycle: c,
        } => {
            let _ = writeln!(out, "xmod {xmod}\ncover {cover}");
            let cov = c.cover();
            let lam = (0..cov.n_pairs()).map(|p| {
                let (i, j, x) = cov.pair(p);
                (vec![i, j, x], vec![c.lam[p]])
            });
            sorted_entries(out, "lam", lam.collect());
            let g = (0..cov.n_triples()).map(|t| (cov.triple(t).to_vec(), vec![c.g[t]]));
            sorted_entries(out, "g", g.collect());
        }
        Item::Coboundary {
            xmod,
            cover,
            coboundary: cb,
        } => {
            let _ = writeln!(out, "xmod {xmod}\ncover {cover}");
            let cov = cb.cover();
            let r = (0..cov.n_objects()).map(|o| {
                let (i, x) = cov.object(o);
                (vec![i, x], vec![cb.r[o]])
            });
            sorted_entries(out, "r", r.collect());
            let v = (0..cov.n_pairs()).map(|p| {
                let (i, j, x) = cov.pair(p);
                (vec![i, j, x], vec![cb.v[p]])
            });
            sorted_entries(out, "v", v.collect());
        }
        Item::Extension { xmod, base, ext } => {
            let _ = writeln!(out, "xmod {xmod}");
            match base {
                BaseRef::Cover(c) => {
                    let _ = writeln!(out, "cover {c}");
                }
                BaseRef::Groupoid(b) => {
                    let _ = writeln!(out, "over {b}");
                    entry(out, "q", &[], ext.q());
                }
            }
            write_extension(out, ext.ext());
        }
        Item::Morita {
            from,
            to,
            witness: w,
        } => {
            let _ = writeln!(out, "from {from}\nto {to}");
            entry(out, "p", &[], &w.p);
            entry(out, "p2", &[], &w.p2);
            for (a, &b) in w.iso.phi_r.iter().enumerate() {
                entry(out, "phir", &[a], &[b]);
            }
            for (a, &b) in w.iso.phi_p.iter().enumerate() {
                entry(out, "phip", &[a], &[b]);
            }
        }
        Item::BaseMorita {
            from,
            to,
            morita: m,
        } => {
            let _ = writeln!(out, "from {from}\nto {to}");
            entry(out, "f", &[], &m.f);
            entry(out, "g", &[], &m.g);
            for (a, &b) in m.phi.iter().enumerate() {
                entry(out, "phi", &[a], &[b]);
            }
        }
    }
}

fn write_extension(out: &mut String, e: &GHExtension) {
    let r = e.r();
    for a in 0..r.n_arrows() {
        entry(out, "arrow", &[a], &[r.src(a), r.tgt(a)]);
    }
    for a in 0..r.n_arrows() {
        entry(out, "phi", &[a], &[e.phi(a)]);
    }
    let rows = r
        .composable_pairs()
        .map(|(a, b)| (vec![a, b], vec![r.mul(a, b)]))
        .collect();
    sorted_entries(out, "prod", rows);
    for p in 0..e.n_elements() {
        entry(out, "elem", &[p], &[e.proj(p)]);
    }
    let nh = e.cm().h().order();
    let rows = (0..e.n_elements())
        .flat_map(|p| (0..nh).map(move |h| (vec![p, h], vec![e.hmul(p, h)])))
        .collect();
    sorted_entries(out, "hact", rows);
    let mut rows = Vec::new();
    for a in 0..r.n_arrows() {
        for &p in e.fibre(r.tgt(a)) {
            rows.push((vec![a, p], vec![e.act(a, p).unwrap()]));
        }
    }
    sorted_entries(out, "gact", rows);
    for p in 0..e.n_elements() {
        entry(out, "chi", &[p], &e.chi_table()[p]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
[group one]
order 1
0

[group Z2]
order 2
0 1
1 0

[xmod h_z2]
g one
h Z2
rho: 0
act 0: 0
act 1: 0

[cover pt2]  # two copies of a point
base 1
set 0: 0
set 1: 0
";

    #[test]
    fn parse_and_reserialize() {
        let d = Document::parse(SMALL).unwrap();
        assert_eq!(d.len(), 4);
        let t = d.to_text();
        assert_eq!(Document::parse(&t).unwrap(), d);
        assert_eq!(Document::parse(&t).unwrap().to_text(), t);
    }

    #[test]
    fn errors_carry_lines_and_kinds() {
        let err = Document::parse("[group x]\norder 2\n0 1\n1 1\n").unwrap_err();
        assert!(matches!(err.root(), Error::NotAGroup(_)));
        assert!(!err.is_document_error());
        let err = Document::parse("[xmod x]\ng nope\nh nope\nrho: 0\n").unwrap_err();
        assert!(matches!(err.root(), Error::UnresolvedReference { .. }));
        let err = Document::parse("order 2\n").unwrap_err();
        assert!(matches!(err, Error::ParseError { line: 1, .. }));
        let err = Document::parse("[group x]\norder 2\n0 1 2\n1 2 0\n2 0 1\n").unwrap_err();
        assert!(matches!(err.root(), Error::ParseError { line: 3, .. }));
        assert!(Document::parse("# nothing\n").unwrap().is_empty());
    }

    #[test]
    fn extension_round_trip() {
        use crate::extension::extension_from_cocycle;
        let mut d = Document::parse(SMALL).unwrap();
        let (cm, cov) = (
            d.xmod("h_z2").unwrap().clone(),
            d.cover("pt2").unwrap().clone(),
        );
        let all = crate::cocycle::enumerate_cocycles(&cm, &cov, 1 << 20).unwrap();
        let c = all.last().unwrap().clone();
        let e = ExtOverBase::from_cech(extension_from_cocycle(&c).unwrap(), &cov).unwrap();
        d.insert(
            "c",
            Item::Cocycle {
                xmod: "h_z2".into(),
                cover: "pt2".into(),
                cocycle: c,
            },
        );
        d.insert(
            "e",
            Item::Extension {
                xmod: "h_z2".into(),
                base: BaseRef::Cover("pt2".into()),
                ext: e,
            },
        );
        let t = d.to_text();
        let d2 = Document::parse(&t).unwrap();
        assert_eq!(d2.to_text(), t);
        assert_eq!(
            d2.extension("e").unwrap().ext(),
            d.extension("e").unwrap().ext()
        );
    }
}
