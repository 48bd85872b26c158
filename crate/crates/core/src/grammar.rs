//! Text specification of schemes, resolved against the subflow catalog.
//!
//! ```text
//! spec    := node
//! node    := NAME [ '[' params ']' ] [ '(' node { ',' node } ')' ] [ ':' params ]
//! params  := KEY '=' VALUE { ';' KEY '=' VALUE }
//! ```
//!
//! Combinators take child nodes: `lie(..)`, `strang(..)`, `yoshida4(strang)`,
//! `gadget[scale=s](A, B)`, `gadget_sym[m=4; scale=s](A, B)`,
//! `gadget_yoshida[m=4; scale=s](A, B)`. Leaves take parameters only; see
//! [`CATALOG`]. Values are numbers or polynomials in `x1.., u, p1..`.

use std::sync::Arc;

use crate::algebra::parse::parse_hamiltonian;
use crate::algebra::poly::FloatHamiltonian;
use crate::composition::{exact_prolonged_step, Gadget, GadgetKind, Scheme, Step};
use crate::error::{Error, Result};
use crate::lifting::{lifted_adaptive, lifted_rk4, FullRk4, HamiltonianBase, Tolerance};
use crate::subflows::{
    vdp_a, vdp_b, vdp_c, AffineU, BernoulliB, BernoulliT, Drift, FiberTransport, Forcing, Harmonic,
    Identity, Kick, PolyField, QuadU, ReebScaling, Slot,
};

/// Leaf names with their parameters, as shown in the CLI help.
pub const CATALOG: &[(&str, &str)] = &[
    ("identity", ""),
    ("drift", "T=<poly in p>"),
    ("kick", "V=<poly in x>"),
    ("harmonic", ""),
    ("reeb", "gamma=<num>"),
    ("quadu", "c=<poly in x>"),
    ("affineu", "a=<poly in x>; b=<poly in x>"),
    ("transport", "g1=<poly in u>; …; gn=<poly in u>"),
    ("bernoulliB", "sigma=<num>"),
    ("bernoulliT", "sigma=<num, nonzero>"),
    ("vdpC", ""),
    ("vdpA", "eps=<num>"),
    ("vdpB", ""),
    ("forcing", "amp=<num>; omega=<num>"),
    (
        "prolonged",
        "H=<poly affine in p>  (closed form when available, else lifted RK4)",
    ),
    ("lifted", "H=<poly affine in p>  (lifted RK4)"),
    (
        "adaptive",
        "H=<poly affine in p>; rtol=<num>; atol=<num>  (lifted DP5)",
    ),
    ("rk4", "H=<poly>  (classical RK4 on the full contact ODE)"),
];

/// A parsed scheme with the declared order of its outermost combinator.
#[derive(Clone)]
pub struct ParsedScheme {
    pub step: Step,
    pub declared_order: Option<u32>,
}

impl std::fmt::Debug for ParsedScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (order {:?})", self.step.label(), self.declared_order)
    }
}

/// Parses a scheme specification for jets of dimension `n`.
pub fn parse_scheme(text: &str, n: usize) -> Result<ParsedScheme> {
    if n == 0 {
        return Err(Error::Precondition(
            "jet dimension must be at least 1".into(),
        ));
    }
    let mut p = SpecParser {
        src: text,
        pos: 0,
        n,
    };
    let node = p.node()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    Ok(match node {
        Node::Scheme(s) => ParsedScheme {
            declared_order: Some(s.declared_order()),
            step: Arc::new(s),
        },
        Node::Step(step) => ParsedScheme {
            step,
            declared_order: None,
        },
    })
}

enum Node {
    Scheme(Scheme),
    Step(Step),
}

impl Node {
    fn into_step(self) -> Step {
        match self {
            Node::Scheme(s) => Arc::new(s),
            Node::Step(s) => s,
        }
    }
}

struct Param<'a> {
    key: &'a str,
    value: &'a str,
    pos: usize,
}

struct Params<'a> {
    items: Vec<Param<'a>>,
    owner: String,
    pos: usize,
}

impl<'a> Params<'a> {
    fn take(&mut self, key: &str) -> Option<Param<'a>> {
        let i = self.items.iter().position(|p| p.key == key)?;
        Some(self.items.remove(i))
    }

    fn required(&mut self, key: &str) -> Result<Param<'a>> {
        self.take(key).ok_or_else(|| {
            Error::parse(self.pos, format!("{} needs parameter `{key}`", self.owner))
        })
    }

    fn number(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match (self.take(key), default) {
            (Some(p), _) => {
                p.value.trim().parse().map_err(|_| {
                    Error::parse(p.pos, format!("`{}` is not a number", p.value.trim()))
                })
            }
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::parse(
                self.pos,
                format!("{} needs parameter `{key}`", self.owner),
            )),
        }
    }

    fn finish(self) -> Result<()> {
        match self.items.first() {
            Some(p) => Err(Error::parse(
                p.pos,
                format!("{} has no parameter `{}`", self.owner, p.key),
            )),
            None => Ok(()),
        }
    }
}

struct SpecParser<'a> {
    src: &'a str,
    pos: usize,
    n: usize,
}

impl<'a> SpecParser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<(&'a str, usize)> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(Error::parse(start, "expected a name"));
        }
        self.pos += len;
        Ok((&self.src[start..start + len], start))
    }

    /// Raw value text up to the next top-level `;`, `,`, `)` or `]`.
    fn value(&mut self) -> &'a str {
        let start = self.pos;
        let mut depth = 0usize;
        for (i, c) in self.rest().char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth > 0 => depth -= 1,
                ')' | ']' | ',' | ';' if depth == 0 => {
                    self.pos = start + i;
                    return &self.src[start..start + i];
                }
                _ => {}
            }
        }
        self.pos = self.src.len();
        &self.src[start..]
    }

    fn params(&mut self, owner: &str, pos: usize) -> Result<Params<'a>> {
        let mut items = Vec::new();
        loop {
            let (key, _) = self.ident()?;
            self.expect('=')?;
            self.skip_ws();
            let vpos = self.pos;
            let value = self.value();
            items.push(Param {
                key,
                value,
                pos: vpos,
            });
            if !self.eat(';') {
                break;
            }
        }
        Ok(Params {
            items,
            owner: owner.to_string(),
            pos,
        })
    }

    fn node(&mut self) -> Result<Node> {
        let (name, pos) = self.ident()?;
        let mut opts = if self.eat('[') {
            let p = self.params(name, pos)?;
            self.expect(']')?;
            Some(p)
        } else {
            None
        };
        let mut children = Vec::new();
        let has_children = self.eat('(');
        if has_children {
            loop {
                children.push(self.node()?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(')')?;
        }
        let params = if self.eat(':') {
            Some(self.params(name, pos)?)
        } else {
            None
        };
        let combinator = matches!(
            name,
            "lie" | "strang" | "yoshida4" | "gadget" | "gadget_sym" | "gadget_yoshida"
        );
        if combinator {
            if !has_children {
                return Err(Error::parse(
                    pos,
                    format!("{name} needs arguments in parentheses"),
                ));
            }
            if let Some(p) = params {
                return Err(Error::parse(
                    p.pos,
                    format!("{name} takes options in [..], not `:`"),
                ));
            }
            return self.combinator(name, pos, opts.take(), children);
        }
        if has_children || opts.is_some() {
            return Err(Error::parse(pos, format!("`{name}` is not a combinator")));
        }
        let params = params.unwrap_or(Params {
            items: Vec::new(),
            owner: name.to_string(),
            pos,
        });
        self.leaf(name, pos, params).map(Node::Step)
    }

    fn combinator(
        &mut self,
        name: &str,
        pos: usize,
        opts: Option<Params<'a>>,
        children: Vec<Node>,
    ) -> Result<Node> {
        let construction = |e: Error| match e {
            Error::Construction(msg) => Error::parse(pos, msg),
            other => other,
        };
        match name {
            "lie" | "strang" => {
                if let Some(o) = opts {
                    o.finish()?;
                }
                let parts = children.into_iter().map(Node::into_step).collect();
                let s = if name == "lie" {
                    Scheme::lie_trotter(parts)
                } else {
                    Scheme::strang(parts)
                };
                s.map(Node::Scheme).map_err(construction)
            }
            "yoshida4" => {
                if let Some(o) = opts {
                    o.finish()?;
                }
                let mut children = children;
                match (children.pop(), children.is_empty()) {
                    (Some(Node::Scheme(base)), true) => Scheme::yoshida4(base)
                        .map(Node::Scheme)
                        .map_err(construction),
                    _ => Err(Error::parse(
                        pos,
                        "yoshida4 takes exactly one order-2 scheme",
                    )),
                }
            }
            _ => {
                let mut opts = opts.unwrap_or(Params {
                    items: Vec::new(),
                    owner: name.to_string(),
                    pos,
                });
                let scale = opts.number("scale", Some(1.0))?;
                let kind = match name {
                    "gadget" => GadgetKind::Basic,
                    _ => {
                        let m = opts.number("m", Some(GadgetKind::DEFAULT_SUBSTEPS as f64))?;
                        if m < 1.0 || m.fract() != 0.0 {
                            return Err(Error::parse(
                                pos,
                                format!("gadget m must be a positive integer, got {m}"),
                            ));
                        }
                        if name == "gadget_sym" {
                            GadgetKind::Symmetric { m: m as usize }
                        } else {
                            GadgetKind::Yoshida { m: m as usize }
                        }
                    }
                };
                opts.finish()?;
                if children.len() != 2 {
                    return Err(Error::parse(
                        pos,
                        format!("{name} takes exactly two substeps"),
                    ));
                }
                let mut it = children.into_iter().map(Node::into_step);
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                Gadget::new(a, b, kind, scale)
                    .map(|g| Node::Step(Arc::new(g)))
                    .map_err(construction)
            }
        }
    }

    fn poly(&self, p: &Param<'_>) -> Result<FloatHamiltonian> {
        parse_hamiltonian(p.value.trim(), Some(self.n)).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(p.pos + pos, msg),
            other => other,
        })
    }

    fn field(&self, p: &Param<'_>, slot: Slot) -> Result<PolyField> {
        PolyField::new(self.poly(p)?, slot).map_err(|e| Error::parse(p.pos, e.to_string()))
    }

    fn prolonged_ham(&self, params: &mut Params<'_>) -> Result<FloatHamiltonian> {
        let p = params.required("H")?;
        let h = self.poly(&p)?;
        if !h.is_prolonged() {
            return Err(Error::parse(p.pos, format!("{h} is not affine in p")));
        }
        Ok(h)
    }

    fn one_dim(&self, name: &str, pos: usize) -> Result<()> {
        if self.n == 1 {
            Ok(())
        } else {
            Err(Error::parse(
                pos,
                format!("{name} is defined for n = 1 only"),
            ))
        }
    }

    fn leaf(&self, name: &str, pos: usize, mut params: Params<'_>) -> Result<Step> {
        let step: Step = match name {
            "identity" => Arc::new(Identity),
            "harmonic" => {
                self.one_dim(name, pos)?;
                Arc::new(Harmonic)
            }
            "drift" => Arc::new(Drift::new(
                self.field(&params.required("T")?, Slot::Momentum)?,
            )),
            "kick" => Arc::new(Kick::new(
                self.field(&params.required("V")?, Slot::Position)?,
            )),
            "reeb" => Arc::new(ReebScaling {
                gamma: params.number("gamma", None)?,
            }),
            "quadu" => Arc::new(QuadU {
                c: self.field(&params.required("c")?, Slot::Position)?,
            }),
            "affineu" => {
                let zero = || PolyField::new(FloatHamiltonian::zero(self.n), Slot::Position);
                let a = match params.take("a") {
                    Some(p) => self.field(&p, Slot::Position)?,
                    None => zero()?,
                };
                let b = match params.take("b") {
                    Some(p) => self.field(&p, Slot::Position)?,
                    None => zero()?,
                };
                Arc::new(AffineU { a, b })
            }
            "transport" => {
                let mut g = Vec::with_capacity(self.n);
                for i in 1..=self.n {
                    let p = match params.take(&format!("g{i}")) {
                        Some(p) => p,
                        None if self.n == 1 => params.required("g")?,
                        None => params.required(&format!("g{i}"))?,
                    };
                    g.push(self.field(&p, Slot::Fiber)?);
                }
                Arc::new(FiberTransport { g })
            }
            "bernoulliB" => Arc::new(BernoulliB {
                sigma: params.number("sigma", None)?,
            }),
            "bernoulliT" => {
                self.one_dim(name, pos)?;
                let sigma = params.number("sigma", None)?;
                Arc::new(BernoulliT::new(sigma).map_err(|e| Error::parse(pos, e.to_string()))?)
            }
            "vdpC" => {
                self.one_dim(name, pos)?;
                Arc::new(vdp_c())
            }
            "vdpA" => {
                self.one_dim(name, pos)?;
                Arc::new(vdp_a(params.number("eps", None)?))
            }
            "vdpB" => {
                self.one_dim(name, pos)?;
                Arc::new(vdp_b())
            }
            "forcing" => Arc::new(Forcing {
                amp: params.number("amp", None)?,
                omega: params.number("omega", None)?,
            }),
            "prolonged" => {
                let h = self.prolonged_ham(&mut params)?;
                exact_prolonged_step(&h).unwrap_or_else(|| Arc::new(lifted_rk4(HamiltonianBase(h))))
            }
            "lifted" => Arc::new(lifted_rk4(HamiltonianBase(
                self.prolonged_ham(&mut params)?,
            ))),
            "adaptive" => {
                let h = self.prolonged_ham(&mut params)?;
                let d = Tolerance::default();
                let tol = Tolerance::new(
                    params.number("rtol", Some(d.rtol))?,
                    params.number("atol", Some(d.atol))?,
                )
                .map_err(|e| Error::parse(pos, e.to_string()))?;
                Arc::new(lifted_adaptive(HamiltonianBase(h), tol))
            }
            "rk4" => Arc::new(FullRk4(self.poly(&params.required("H")?)?)),
            other => return Err(Error::parse(pos, format!("unknown substep `{other}`"))),
        };
        params.finish()?;
        Ok(step)
    }
}
