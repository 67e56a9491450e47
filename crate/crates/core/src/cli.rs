//! The `gerbelab` command line tool.
//!
//! Exit codes: 0 success or true, 1 checked false, 2 the document does not
//! load (parse error, dangling name), 3 a precondition of the requested
//! operation fails (for instance `SearchSpaceTooLarge`).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::cech::{cech_groupoid, Cover};
use crate::cocycle::h1_classes;
use crate::error::Error;
use crate::extension::{adapt, cocycle_from_adapted, extension_from_cocycle, is_adapted};
use crate::fingroup::automorphism_group;
use crate::format::{BaseRef, Document, Item, Kind};
use crate::morita::{
    extensions_morita_equivalent, gerbe_class, iso_witness, transport, ExtOverBase,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_DOCUMENT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "gerbelab",
    version,
    about = "Finite crossed modules, cocycles and their extensions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate every section.
    Check { file: PathBuf },
    /// Print the automorphism group of a group.
    Aut {
        file: PathBuf,
        #[arg(long)]
        group: String,
    },
    /// Count H¹ classes of a crossed module on a cover.
    H1 {
        file: PathBuf,
        #[arg(long)]
        xmod: String,
        #[arg(long)]
        cover: String,
        /// Also print the least representative of each class.
        #[arg(long)]
        reps: bool,
    },
    /// Build the adapted extension of a cocycle.
    Build {
        file: PathBuf,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        out: PathBuf,
        /// Name of the new extension section.
        #[arg(long)]
        name: Option<String>,
    },
    /// Print the cocycle of an adapted extension.
    Extract {
        file: PathBuf,
        #[arg(long)]
        ext: String,
    },
    /// Exit 0 iff extracting the built extension gives the cocycle back.
    Roundtrip {
        file: PathBuf,
        #[arg(long)]
        cocycle: String,
    },
    /// Write an adapted extension isomorphic to the given one, with the
    /// isomorphism as a morita section.
    Adapt {
        file: PathBuf,
        #[arg(long)]
        ext: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the least cocycle of the class of an extension over a
    /// discrete base.
    Classify {
        file: PathBuf,
        #[arg(long)]
        ext: String,
    },
    /// Exit 0 iff two extensions over a discrete base are Morita equivalent.
    Equiv {
        file: PathBuf,
        #[arg(long)]
        ext: String,
        #[arg(long)]
        ext2: String,
    },
    /// Move an extension along a Morita equivalence of bases.
    Transport {
        file: PathBuf,
        #[arg(long)]
        ext: String,
        #[arg(long)]
        basemorita: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Print the Čech groupoid of a cover.
    Cech {
        file: PathBuf,
        #[arg(long)]
        cover: String,
    },
}

/// A failed command: the exit code and the message for standard error.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = if e.is_document_error() {
            EXIT_DOCUMENT
        } else {
            EXIT_PRECONDITION
        };
        Fail(code, e.to_string())
    }
}

type Outcome = std::result::Result<i32, Fail>;

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_DOCUMENT
            } else {
                EXIT_OK
            };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    let bound = crate::max_search_from_env();
    match dispatch(cli.cmd, bound, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Fail> {
    std::fs::read_to_string(path)
        .map_err(|e| Fail(EXIT_DOCUMENT, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> std::result::Result<Document, Fail> {
    let text = read(path)?;
    Document::parse(&text).map_err(|e| Fail(EXIT_DOCUMENT, e.to_string()))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Fail> {
    std::fs::write(path, text)
        .map_err(|e| Fail(EXIT_PRECONDITION, format!("{}: {e}", path.display())))
}

fn say(out: &mut dyn Write, text: &str) -> std::result::Result<(), Fail> {
    out.write_all(text.as_bytes())
        .map_err(|e| Fail(EXIT_PRECONDITION, e.to_string()))
}

/// The extension `name` and the cover it is a Čech extension of.
fn cech_extension<'a>(
    doc: &'a Document,
    name: &str,
) -> std::result::Result<(&'a ExtOverBase, String, String, Arc<Cover>), Fail> {
    match doc.item(Kind::Extension, name)? {
        Item::Extension {
            xmod,
            base: BaseRef::Cover(c),
            ext,
        } => Ok((ext, xmod.clone(), c.clone(), doc.cover(c)?.clone())),
        Item::Extension { .. } => Err(Error::BaseNotCech.into()),
        _ => unreachable!(),
    }
}

fn xmod_of(doc: &Document, name: &str) -> std::result::Result<String, Fail> {
    match doc.item(Kind::Extension, name)? {
        Item::Extension { xmod, .. } => Ok(xmod.clone()),
        _ => unreachable!(),
    }
}

/// The sections of `names` and everything they reference.
fn closure(doc: &Document, names: &[(Kind, &str)]) -> std::result::Result<Document, Fail> {
    let mut out = Document::new();
    for &(k, n) in names {
        for (kind, name, item) in doc.closure(k, n)?.items() {
            debug_assert_eq!(kind, item.kind());
            out.insert(name, item.clone());
        }
    }
    Ok(out)
}

fn dispatch(cmd: Cmd, bound: u64, out: &mut dyn Write) -> Outcome {
    match cmd {
        Cmd::Check { file } => {
            let text = read(&file)?;
            match Document::parse(&text) {
                Ok(doc) => {
                    say(out, &format!("ok {} sections\n", doc.len()))?;
                    Ok(EXIT_OK)
                }
                Err(e) if e.is_document_error() => Err(Fail(EXIT_DOCUMENT, e.to_string())),
                Err(e) => {
                    say(out, &format!("{}\n{e}\n", e.name()))?;
                    Ok(EXIT_FALSE)
                }
            }
        }
        Cmd::Aut { file, group } => {
            let doc = load(&file)?;
            let aut = automorphism_group(doc.group(&group)?);
            let mut s = format!("order {}\n", aut.elements.len());
            for (k, f) in aut.elements.iter().enumerate() {
                s += &format!("aut {k}: {}\n", join(&f.map));
            }
            say(out, &s)?;
            Ok(EXIT_OK)
        }
        Cmd::H1 {
            file,
            xmod,
            cover,
            reps,
        } => {
            let doc = load(&file)?;
            let classes = h1_classes(doc.xmod(&xmod)?, doc.cover(&cover)?, bound)?;
            let mut s = format!("classes {}\n", classes.len());
            if reps {
                let mut d = closure(&doc, &[(Kind::Xmod, &xmod), (Kind::Cover, &cover)])?;
                for (k, c) in classes.iter().enumerate() {
                    s += &format!("class {k}: {} members\n", c.members.len());
                    let item = Item::Cocycle {
                        xmod: xmod.clone(),
                        cover: cover.clone(),
                        cocycle: c.representative.clone(),
                    };
                    d.insert(&format!("class{k}"), item);
                }
                s += "\n";
                s += &d.to_text();
            }
            say(out, &s)?;
            Ok(EXIT_OK)
        }
        Cmd::Build {
            file,
            cocycle,
            out: path,
            name,
        } => {
            let mut doc = load(&file)?;
            let (xmod, cover) = match doc.item(Kind::Cocycle, &cocycle)? {
                Item::Cocycle { xmod, cover, .. } => (xmod.clone(), cover.clone()),
                _ => unreachable!(),
            };
            let c = doc.cocycle(&cocycle)?;
            let e = ExtOverBase::from_cech(extension_from_cocycle(c)?, c.cover())?;
            let name = name.unwrap_or_else(|| format!("{cocycle}_ext"));
            doc.insert(
                &name,
                Item::Extension {
                    xmod,
                    base: BaseRef::Cover(cover),
                    ext: e,
                },
            );
            write_file(&path, &doc.to_text())?;
            say(out, &format!("wrote extension {name}\n"))?;
            Ok(EXIT_OK)
        }
        Cmd::Extract { file, ext } => {
            let doc = load(&file)?;
            let (e, xmod, cover, cov) = cech_extension(&doc, &ext)?;
            let c = cocycle_from_adapted(e.ext(), &cov)?;
            let mut d = closure(&doc, &[(Kind::Xmod, &xmod), (Kind::Cover, &cover)])?;
            d.insert(
                &format!("{ext}_cocycle"),
                Item::Cocycle {
                    xmod,
                    cover,
                    cocycle: c,
                },
            );
            say(out, &d.to_text())?;
            Ok(EXIT_OK)
        }
        Cmd::Roundtrip { file, cocycle } => {
            let doc = load(&file)?;
            let c = doc.cocycle(&cocycle)?;
            let e = extension_from_cocycle(c)?;
            let back = cocycle_from_adapted(&e, c.cover())?;
            if &back == c && is_adapted(&e, c.cover())? {
                say(out, "ok\n")?;
                Ok(EXIT_OK)
            } else {
                say(out, "mismatch\n")?;
                Ok(EXIT_FALSE)
            }
        }
        Cmd::Adapt {
            file,
            ext,
            out: path,
        } => {
            let mut doc = load(&file)?;
            let (e, xmod, cover, cov) = cech_extension(&doc, &ext)?;
            let (adapted, iso) = adapt(e.ext(), &cov)?;
            let adapted = ExtOverBase::from_cech(adapted, &cov)?;
            let witness = iso_witness(&adapted, e, &iso)?;
            let name = format!("{ext}_adapted");
            doc.insert(
                &format!("{name}_iso"),
                Item::Morita {
                    from: name.clone(),
                    to: ext.clone(),
                    witness,
                },
            );
            doc.insert(
                &name,
                Item::Extension {
                    xmod,
                    base: BaseRef::Cover(cover),
                    ext: adapted,
                },
            );
            write_file(&path, &doc.to_text())?;
            say(
                out,
                &format!("wrote extension {name} and morita {name}_iso\n"),
            )?;
            Ok(EXIT_OK)
        }
        Cmd::Classify { file, ext } => {
            let doc = load(&file)?;
            let xmod = xmod_of(&doc, &ext)?;
            let c = gerbe_class(doc.extension(&ext)?, bound)?;
            let mut d = closure(&doc, &[(Kind::Xmod, &xmod)])?;
            d.insert("points", Item::Cover(c.cover().clone()));
            d.insert(
                "class",
                Item::Cocycle {
                    xmod,
                    cover: "points".into(),
                    cocycle: c,
                },
            );
            say(out, &d.to_text())?;
            Ok(EXIT_OK)
        }
        Cmd::Equiv { file, ext, ext2 } => {
            let doc = load(&file)?;
            let (e1, e2) = (doc.extension(&ext)?, doc.extension(&ext2)?);
            if extensions_morita_equivalent(e1, e2, bound)? {
                say(out, "true\n")?;
                Ok(EXIT_OK)
            } else {
                say(out, "false\n")?;
                Ok(EXIT_FALSE)
            }
        }
        Cmd::Transport {
            file,
            ext,
            basemorita,
            out: path,
            name,
        } => {
            let mut doc = load(&file)?;
            let (from, to, bm) = match doc.item(Kind::BaseMorita, &basemorita)? {
                Item::BaseMorita { from, to, morita } => (from.clone(), to.clone(), morita.clone()),
                _ => unreachable!(),
            };
            let e = doc.extension(&ext)?;
            if !e.base().same_structure(doc.groupoid(&from)?) {
                return Err(Error::DomainMismatch(format!("{ext} is not over {from}")).into());
            }
            let moved = transport(&bm, doc.groupoid(&to)?, e)?;
            let xmod = xmod_of(&doc, &ext)?;
            let name = name.unwrap_or_else(|| format!("{ext}_transported"));
            doc.insert(
                &name,
                Item::Extension {
                    xmod,
                    base: BaseRef::Groupoid(to),
                    ext: moved,
                },
            );
            write_file(&path, &doc.to_text())?;
            say(out, &format!("wrote extension {name}\n"))?;
            Ok(EXIT_OK)
        }
        Cmd::Cech { file, cover } => {
            let doc = load(&file)?;
            let g = cech_groupoid(doc.cover(&cover)?);
            let mut s = format!("objects {}\narrows {}\n", g.n_objects(), g.n_arrows());
            for o in 0..g.n_objects() {
                s += &format!("object {o}: {}\n", join(g.obj_label(o)));
            }
            for a in 0..g.n_arrows() {
                s += &format!(
                    "arrow {a}: {} -> {} {}\n",
                    g.src(a),
                    g.tgt(a),
                    join(g.arrow_label(a))
                );
            }
            say(out, &s)?;
            Ok(EXIT_OK)
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
