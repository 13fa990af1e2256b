use clap::ValueEnum;
use qtsym::hlv;
use qtsym::macdonald;
use qtsym::partition::{partitions_of, partitions_up_to, Partition};
use qtsym::{Error, Result};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Ght,
    Duality,
    Specializations,
    Theorem7,
    Corollary,
    Stability,
    Polynomiality,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::Ght => "ght",
            Identity::Duality => "duality",
            Identity::Specializations => "specializations",
            Identity::Theorem7 => "theorem7",
            Identity::Corollary => "corollary",
            Identity::Stability => "stability",
            Identity::Polynomiality => "polynomiality",
        }
    }
}

pub struct Params {
    pub lambda: Vec<Partition>,
    pub mu: Vec<Partition>,
    pub k: Vec<usize>,
    pub size: usize,
    pub order: usize,
}

pub struct Instance {
    pub name: String,
    pub pass: bool,
    pub sides: Vec<(String, String)>,
    pub extra: Option<(String, Value)>,
}

pub struct Report {
    pub identity: Identity,
    pub instances: Vec<Instance>,
}

fn sides(pass: bool, pairs: Vec<(&str, String)>) -> Vec<(String, String)> {
    if pass {
        Vec::new()
    } else {
        pairs.into_iter().map(|(a, b)| (a.to_string(), b)).collect()
    }
}

fn lambdas(p: &Params, nonempty: bool) -> Vec<Partition> {
    if !p.lambda.is_empty() {
        return p.lambda.clone();
    }
    partitions_up_to(p.size)
        .into_iter()
        .filter(|l| !nonempty || !l.is_empty())
        .collect()
}

/// Every instance the parameters describe, with preconditions checked
/// up front so nothing is computed for a bad request.
fn validate(id: Identity, p: &Params) -> Result<()> {
    let pre = |ok: bool, msg: String| {
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(msg))
        }
    };
    match id {
        Identity::Theorem7 => {
            for l in &p.lambda {
                for mu in &p.mu {
                    pre(!mu.is_empty(), "1 <= μ1 fails: μ is empty".into())?;
                    pre(
                        mu.part(0) <= l.size(),
                        format!("μ1 <= |λ| fails: {} > {}", mu.part(0), l.size()),
                    )?;
                    pre(
                        l.size() <= mu.size(),
                        format!("|λ| <= |μ| fails: {} > {}", l.size(), mu.size()),
                    )?;
                    pre(
                        mu.size() <= p.order,
                        format!("truncation {} is below |μ| = {}", p.order, mu.size()),
                    )?;
                }
            }
            pre(
                p.lambda.is_empty() == p.mu.is_empty(),
                "give both --lambda and --mu, or neither".into(),
            )
        }
        Identity::Corollary => {
            for l in &p.lambda {
                pre(!l.is_empty(), "|λ| >= 1 fails".into())?;
                for &k in &p.k {
                    pre(k >= l.size(), format!("k >= |λ| fails: {k} < {}", l.size()))?;
                    pre(
                        p.order >= k,
                        format!("truncation {} is below k = {k}", p.order),
                    )?;
                }
            }
            Ok(())
        }
        Identity::Stability => {
            for &k in &p.k {
                pre(k >= 2, format!("stability needs k >= 2, got {k}"))?;
                pre(
                    k < hlv::MAX_K,
                    format!("stability needs k < {}, got {k}", hlv::MAX_K),
                )?;
            }
            Ok(())
        }
        Identity::Polynomiality => {
            for &k in &p.k {
                pre(
                    (1..=hlv::MAX_K).contains(&k),
                    format!("k must lie in 1..={}, got {k}", hlv::MAX_K),
                )?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

pub fn run(id: Identity, p: &Params) -> Result<Report> {
    validate(id, p)?;
    let n = p.order;
    let mut out = Vec::new();
    match id {
        Identity::Ght => {
            for l in lambdas(p, false) {
                let h = macdonald::macdonald_h(&l)?;
                let (a, b) = (macdonald::op_v(&h, n)?, macdonald::ght_rhs(&l, n)?);
                let pass = a == b;
                out.push(Instance {
                    name: format!("lambda={l:?}"),
                    pass,
                    sides: sides(
                        pass,
                        vec![("V(H)", a.to_string()), ("pExp[D X/Q]", b.to_string())],
                    ),
                    extra: None,
                });
            }
        }
        Identity::Duality => {
            let ls = lambdas(p, false);
            let mus = if p.mu.is_empty() {
                ls.clone()
            } else {
                p.mu.clone()
            };
            for l in &ls {
                for mu in &mus {
                    let (a, b) = (
                        macdonald::koornwinder_value(l, mu)?,
                        macdonald::koornwinder_value(mu, l)?,
                    );
                    let pass = a == b;
                    out.push(Instance {
                        name: format!("lambda={l:?} mu={mu:?}"),
                        pass,
                        sides: sides(
                            pass,
                            vec![
                                ("(lambda,mu)", a.to_string()),
                                ("(mu,lambda)", b.to_string()),
                            ],
                        ),
                        extra: None,
                    });
                }
            }
        }
        Identity::Specializations => {
            for l in lambdas(p, true) {
                let r = macdonald::check_specializations(&l)?;
                let pass = r.passed();
                out.push(Instance {
                    name: format!("lambda={l:?}"),
                    pass,
                    sides: sides(
                        pass,
                        vec![
                            ("H[1-u]", r.one_minus_u.0.to_string()),
                            ("product", r.one_minus_u.1.to_string()),
                            ("H[-1]", r.minus_one.0.to_string()),
                            ("closed form", r.minus_one.1.to_string()),
                            ("H at t=1/q", r.principal.0.to_string()),
                            ("Schur quotient", r.principal.1.to_string()),
                        ],
                    ),
                    extra: None,
                });
            }
        }
        Identity::Theorem7 => {
            let pairs: Vec<(Partition, Partition)> = if p.lambda.is_empty() {
                let mut v = Vec::new();
                for b in 1..=p.size.min(n) {
                    for mu in partitions_of(b) {
                        for a in mu.part(0)..=b {
                            for l in partitions_of(a) {
                                v.push((l, mu.clone()));
                            }
                        }
                    }
                }
                v
            } else {
                p.lambda
                    .iter()
                    .flat_map(|l| p.mu.iter().map(move |m| (l.clone(), m.clone())))
                    .collect()
            };
            for (l, mu) in pairs {
                let (a, b) = hlv::theorem7_sides(&l, &mu, n)?;
                let pass = a == b;
                out.push(Instance {
                    name: format!("lambda={l:?} mu={mu:?}"),
                    pass,
                    sides: sides(pass, vec![("lhs", a.to_string()), ("rhs", b.to_string())]),
                    extra: None,
                });
            }
        }
        Identity::Corollary => {
            let ks: Vec<usize> = if p.k.is_empty() {
                (1..=p.size.min(n)).collect()
            } else {
                p.k.clone()
            };
            for k in ks {
                let ls: Vec<Partition> = if p.lambda.is_empty() {
                    (1..=k).flat_map(partitions_of).collect()
                } else {
                    p.lambda.clone()
                };
                for l in ls {
                    let (a, b) = hlv::corollary_sides(&l, k, n)?;
                    let pass = a == b;
                    out.push(Instance {
                        name: format!("lambda={l:?} k={k}"),
                        pass,
                        sides: sides(pass, vec![("lhs", a.to_string()), ("rhs", b.to_string())]),
                        extra: None,
                    });
                }
            }
        }
        Identity::Stability => {
            let ks = if p.k.is_empty() {
                vec![2, 3]
            } else {
                p.k.clone()
            };
            for k in ks {
                let pass = hlv::check_stability(k, n)?;
                let dump = if pass {
                    Vec::new()
                } else {
                    vec![("HH(k)".to_string(), hlv::hh(k, n)?.to_string())]
                };
                out.push(Instance {
                    name: format!("k={k}"),
                    pass,
                    sides: dump,
                    extra: None,
                });
            }
        }
        Identity::Polynomiality => {
            let ks = if p.k.is_empty() { vec![3] } else { p.k.clone() };
            for k in ks {
                let r = hlv::check_polynomiality(k, n)?;
                let list: Vec<Value> = r
                    .terms
                    .iter()
                    .map(|(key, c)| {
                        let idx: Vec<&[usize]> = key.0.iter().map(Partition::parts).collect();
                        json!({"index": idx, "coeff": c.to_string(), "polynomial": c.is_polynomial()})
                    })
                    .collect();
                let mut sides = Vec::new();
                for (key, c) in &r.violations {
                    sides.push((format!("not a polynomial at {key:?}"), c.to_string()));
                }
                if !r.round_trip {
                    sides.push(("round trip".into(), "pExp[HH/Q] differs from Omega".into()));
                }
                out.push(Instance {
                    name: format!("k={k}"),
                    pass: r.passed(),
                    sides,
                    extra: Some(("coefficients".into(), Value::Array(list))),
                });
            }
        }
    }
    Ok(Report {
        identity: id,
        instances: out,
    })
}

impl Report {
    pub fn passed(&self) -> usize {
        self.instances.iter().filter(|i| i.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.instances.len() - self.passed()
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for i in &self.instances {
            s += &format!(
                "{} {} {}\n",
                if i.pass { "PASS" } else { "FAIL" },
                self.identity.name(),
                i.name
            );
            for (label, side) in &i.sides {
                s += &format!("  {label}: {side}\n");
            }
            if let Some((_, Value::Array(list))) = &i.extra {
                for t in list {
                    s += &format!("  {} {}\n", t["index"], t["coeff"].as_str().unwrap_or(""));
                }
            }
        }
        let w = self.identity.name().len().max(8);
        s += &format!("{:<w$}  {:>6}  {:>6}\n", "identity", "passed", "failed");
        s += &format!(
            "{:<w$}  {:>6}  {:>6}",
            self.identity.name(),
            self.passed(),
            self.failed()
        );
        s
    }

    pub fn json(&self) -> Value {
        let instances: Vec<Value> = self
            .instances
            .iter()
            .map(|i| {
                let mut v = json!({"instance": i.name, "pass": i.pass});
                if !i.sides.is_empty() {
                    v["sides"] = i
                        .sides
                        .iter()
                        .map(|(a, b)| json!({"label": a, "value": b}))
                        .collect();
                }
                if let Some((k, x)) = &i.extra {
                    v[k.as_str()] = x.clone();
                }
                v
            })
            .collect();
        json!({
            "identity": self.identity.name(),
            "instances": instances,
            "passed": self.passed(),
            "failed": self.failed(),
        })
    }
}
