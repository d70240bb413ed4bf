//! Lagrangian-intersection model of a Darboux cdga: the (−1)-shifted cotangent carrier,
//! its sections and replacements, derived tensors, the comparison isomorphisms κ and the
//! isotropic structures whose residue recovers the symplectic form.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use darboux::{darboux_subalgebra, subalgebra_without, Case, Darboux, DarbouxError};
use derham::{check_isotropic, check_shifted_symplectic, pullback_form, DeRham, Direction, FormError, IsotropyWitness, ShiftedForm};
use gca_core::{partial_by_name, sum_in, Algebra, Coeff, Elem, GcaError, Generator, Morphism, Presentation, Report};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LagError {
    #[error("base is not polynomial over a smooth ring: {0}")]
    NotPolynomial(String),
    #[error("expected a function of degree {expected}, got {found}")]
    Degree { expected: i32, found: String },
    #[error("generator table is not a bijection: {0}")]
    NotBijective(String),
    #[error("differential mismatch: {0}")]
    Differential(String),
    #[error("incompatible inputs: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
}

pub type Result<T> = std::result::Result<T, LagError>;

pub fn alpha(x: &str) -> String {
    format!("alpha_{x}")
}
pub fn beta(y: &str) -> String {
    format!("beta_{y}")
}
pub fn theta(y: &str) -> String {
    format!("theta_{y}")
}
pub fn tau(x: &str) -> String {
    format!("tau_{x}")
}
pub fn theta_prime(y: &str) -> String {
    format!("thetap_{y}")
}
pub fn tau_prime(x: &str) -> String {
    format!("taup_{x}")
}
pub fn xi(x: &str) -> String {
    format!("xi_{x}")
}

fn failures(r: &Report) -> String {
    r.failures().map(|e| format!("{}: {}", e.name, e.residual.clone().unwrap_or_default())).collect::<Vec<_>>().join("; ")
}

/// `p` with extra generators; existing differentials are carried over, the new ones are
/// computed by `new_diff` inside the enlarged algebra.
fn adjoin(
    p: &Presentation,
    gens: Vec<Generator>,
    new_diff: impl FnOnce(&Arc<Algebra>) -> Result<Vec<(String, Elem)>>,
) -> Result<Arc<Presentation>> {
    let alg = p.algebra();
    let mut all = alg.generators().to_vec();
    all.extend(gens);
    let big = Algebra::with_units(alg.field(), all, &alg.unit_strings())?;
    let mut diff = Vec::new();
    for (g, dg) in alg.generators().iter().zip(p.differentials()) {
        diff.push((g.name.clone(), dg.embed(&big)?));
    }
    diff.extend(new_diff(&big)?);
    Ok(Arc::new(Presentation::from_names(big, diff)?))
}

fn gen(a: &Arc<Algebra>, name: &str) -> Elem {
    Elem::gen(a, name).expect("generator was just declared")
}

/// T*[−1] of a quasi-smooth `B = B(0)[y]`, presented as `C = B[α, β]`.
#[derive(Clone, Debug)]
pub struct CotangentCarrier {
    pub base: Arc<Presentation>,
    pub total: Arc<Presentation>,
    pub dr: Arc<DeRham>,
    /// Liouville form, shift −1
    pub omega_l: ShiftedForm,
    pub xs: Vec<String>,
    pub ys: Vec<String>,
    /// `B → C`
    pub inclusion: Morphism,
}

impl CotangentCarrier {
    pub fn alpha_names(&self) -> Vec<String> {
        self.xs.iter().map(|x| alpha(x)).collect()
    }

    pub fn beta_names(&self) -> Vec<String> {
        self.ys.iter().map(|y| beta(y)).collect()
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        r.extend("", self.total.check_d_squared());
        r.extend("inclusion ", self.inclusion.check());
        if !self.total.algebra().is_empty() {
            r.extend("liouville ", check_shifted_symplectic(&self.dr, &self.omega_l));
        }
        r
    }
}

pub fn shifted_cotangent(b: &Arc<Presentation>) -> Result<CotangentCarrier> {
    let alg = b.algebra();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for g in alg.generators() {
        match g.degree {
            0 => xs.push(g.name.clone()),
            -1 => ys.push(g.name.clone()),
            d => return Err(LagError::NotPolynomial(format!("generator {} has degree {d}", g.name))),
        }
    }
    for y in &ys {
        let dy = b.diff_by_name(y)?;
        if dy.support().iter().any(|&h| alg.generator(h).degree != 0) {
            return Err(LagError::NotPolynomial(format!("d({y}) = {dy} leaves the base ring")));
        }
    }
    let mut extra: Vec<Generator> = xs.iter().map(|x| Generator::new(alpha(x), -1)).collect();
    extra.extend(ys.iter().map(|y| Generator::new(beta(y), 0)));
    let total = adjoin(b, extra, |c| {
        // dα_j = −Σ_i ∂g_i/∂x_j β_i, dβ_i = 0
        let mut diff = Vec::new();
        for x in &xs {
            let mut da = Elem::zero(c);
            for y in &ys {
                let dgi = partial_by_name(&b.diff_by_name(y)?.embed(c)?, x)?;
                da = &da - &(&dgi * &gen(c, &beta(y)));
            }
            diff.push((alpha(x), da));
        }
        Ok(diff)
    })?;
    let dr = DeRham::new(&total)?;
    let mut omega = Elem::zero(dr.algebra());
    let xa = sum_in(dr.algebra(), xs.iter().map(|x| &dr.ddr_gen(x).unwrap() * &dr.ddr_gen(&alpha(x)).unwrap()));
    if ys.is_empty() {
        omega = &omega + &xa;
    } else {
        for y in &ys {
            omega = &omega + &(&dr.ddr_gen(y)? * &dr.ddr_gen(&beta(y))?);
        }
        omega = &omega - &xa;
    }
    let inclusion = Morphism::new(b, &total, Vec::new())?;
    Ok(CotangentCarrier { base: b.clone(), total, dr, omega_l: ShiftedForm::new(-1, omega), xs, ys, inclusion })
}

pub fn zero_section(t: &CotangentCarrier) -> Result<Morphism> {
    let balg = t.base.algebra();
    let images = t.alpha_names().into_iter().chain(t.beta_names()).map(|n| (n, Elem::zero(balg)));
    Ok(Morphism::new(&t.total, &t.base, images)?)
}

fn in_base(t: &CotangentCarrier, psi: &Elem) -> Result<Elem> {
    let psi = psi.embed(t.base.algebra())?;
    match psi.degree()? {
        None | Some(-1) => Ok(psi),
        Some(d) => Err(LagError::Degree { expected: -1, found: format!("{psi} of degree {d}") }),
    }
}

fn graph_images(t: &CotangentCarrier, psi: &Elem) -> Result<Vec<(String, Elem)>> {
    let mut images = Vec::new();
    for x in &t.xs {
        images.push((alpha(x), partial_by_name(psi, x)?));
    }
    for y in &t.ys {
        images.push((beta(y), partial_by_name(psi, y)?));
    }
    Ok(images)
}

/// The section `d_dR Ψ`: `α_j ↦ ∂Ψ/∂x_j`, `β_i ↦ ∂Ψ/∂y_i`.
pub fn graph_section(t: &CotangentCarrier, psi: &Elem) -> Result<Morphism> {
    let psi = in_base(t, psi)?;
    Ok(Morphism::new(&t.total, &t.base, graph_images(t, &psi)?)?)
}

#[derive(Clone, Debug)]
pub enum Variant {
    /// replaces the zero section: `dθ_i = β_i`, `dτ_j = α_j + Σ ∂g_i/∂x_j θ_i`
    Zero,
    /// replaces the section `d_dR Ψ`
    Graph(Elem),
    /// `M = C₀[τ_k]`, `dτ_k = α_k`, for a carrier over a smooth base
    GeneralM,
}

/// A semifree C-algebra `D` with a witness `D → B` killing the adjoined generators.
#[derive(Clone, Debug)]
pub struct ReplacementData {
    pub carrier: Arc<Presentation>,
    pub presentation: Arc<Presentation>,
    /// `C → D`
    pub inclusion: Morphism,
    /// `D → B`
    pub witness: Morphism,
    pub adjoined: Vec<String>,
}

impl ReplacementData {
    /// `D = C` with the identity witness.
    pub fn trivial(c: &Arc<Presentation>) -> ReplacementData {
        ReplacementData {
            carrier: c.clone(),
            presentation: c.clone(),
            inclusion: Morphism::identity(c),
            witness: Morphism::identity(c),
            adjoined: Vec::new(),
        }
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        r.extend("", self.presentation.check_d_squared());
        r.extend("inclusion ", self.inclusion.check());
        r.extend("witness ", self.witness.check());
        for n in &self.adjoined {
            match self.witness.image_of(n) {
                Ok(e) => r.zero(format!("witness kills {n}"), e),
                Err(e) => r.fail(format!("witness kills {n}"), e.to_string(), 0),
            }
        }
        r
    }
}

pub fn replacement_d(t: &CotangentCarrier, variant: &Variant) -> Result<ReplacementData> {
    let c = &t.total;
    let b = &t.base;
    let dg = |y: &str, x: &str, alg: &Arc<Algebra>| -> Result<Elem> { Ok(partial_by_name(&b.diff_by_name(y)?.embed(alg)?, x)?) };
    let (d, witness_images, adjoined) = match variant {
        Variant::Zero | Variant::GeneralM => {
            if matches!(variant, Variant::GeneralM) && !t.ys.is_empty() {
                return Err(LagError::Mismatch("the M replacement needs a carrier over a smooth base".into()));
            }
            let mut gens: Vec<Generator> = t.ys.iter().map(|y| Generator::new(theta(y), -1)).collect();
            gens.extend(t.xs.iter().map(|x| Generator::new(tau(x), -2)));
            let d = adjoin(c, gens, |a| {
                let mut diff = Vec::new();
                for y in &t.ys {
                    diff.push((theta(y), gen(a, &beta(y))));
                }
                for x in &t.xs {
                    let mut e = gen(a, &alpha(x));
                    for y in &t.ys {
                        e = &e + &(&dg(y, x, a)? * &gen(a, &theta(y)));
                    }
                    diff.push((tau(x), e));
                }
                Ok(diff)
            })?;
            let adjoined: Vec<String> = t.ys.iter().map(|y| theta(y)).chain(t.xs.iter().map(|x| tau(x))).collect();
            let zero = t.alpha_names().into_iter().chain(t.beta_names()).chain(adjoined.clone());
            let images: Vec<(String, Elem)> = zero.map(|n| (n, Elem::zero(b.algebra()))).collect();
            (d, images, adjoined)
        }
        Variant::Graph(psi) => {
            let psi_b = in_base(t, psi)?;
            let mut gens: Vec<Generator> = t.ys.iter().map(|y| Generator::new(theta_prime(y), -1)).collect();
            gens.extend(t.xs.iter().map(|x| Generator::new(tau_prime(x), -2)));
            let d = adjoin(c, gens, |a| {
                let psi = psi_b.embed(a)?;
                let mut diff = Vec::new();
                for y in &t.ys {
                    diff.push((theta_prime(y), &partial_by_name(&psi, y)? - &gen(a, &beta(y))));
                }
                for x in &t.xs {
                    let mut e = &partial_by_name(&psi, x)? - &gen(a, &alpha(x));
                    for y in &t.ys {
                        e = &e + &(&dg(y, x, a)? * &gen(a, &theta_prime(y)));
                    }
                    diff.push((tau_prime(x), e));
                }
                Ok(diff)
            })?;
            let adjoined: Vec<String> =
                t.ys.iter().map(|y| theta_prime(y)).chain(t.xs.iter().map(|x| tau_prime(x))).collect();
            let mut images = graph_images(t, &psi_b)?;
            images.extend(adjoined.iter().map(|n| (n.clone(), Elem::zero(b.algebra()))));
            (d, images, adjoined)
        }
    };
    let inclusion = Morphism::new(c, &d, Vec::new())?;
    let witness = Morphism::new(&d, b, witness_images)?;
    Ok(ReplacementData { carrier: c.clone(), presentation: d, inclusion, witness, adjoined })
}

/// `B ⊗_C D` for `left: C → B`, together with its two structure maps.
#[derive(Clone, Debug)]
pub struct TensorData {
    pub presentation: Arc<Presentation>,
    /// `B → B ⊗_C D`
    pub from_left: Morphism,
    /// `D → B ⊗_C D`
    pub from_repl: Morphism,
}

pub fn derived_tensor(left: &Morphism, repl: &ReplacementData) -> Result<TensorData> {
    let calg = repl.carrier.algebra();
    if !left.source().algebra().same_as(calg) {
        return Err(LagError::Mismatch("left map does not start at the replacement's carrier".into()));
    }
    let b = left.target();
    let dp = &repl.presentation;
    let dalg = dp.algebra();
    let new_gens: Vec<Generator> = repl.adjoined.iter().map(|n| dalg.generator(dalg.id(n).unwrap()).clone()).collect();
    let mut images_cell = Vec::new();
    let presentation = adjoin(b, new_gens, |t| {
        let images = dalg
            .generators()
            .iter()
            .map(|g| if calg.has(&g.name) { Ok(left.image_of(&g.name)?.embed(t)?) } else { Ok(gen(t, &g.name)) })
            .collect::<Result<Vec<Elem>>>()?;
        let diff = repl
            .adjoined
            .iter()
            .map(|n| Ok((n.clone(), dp.diff_by_name(n)?.substitute(t, &images)?)))
            .collect::<Result<Vec<_>>>()?;
        images_cell = images;
        Ok(diff)
    })?;
    let from_left = Morphism::new(b, &presentation, Vec::new())?;
    let named = dalg.generators().iter().map(|g| g.name.clone()).zip(images_cell);
    let from_repl = Morphism::new(dp, &presentation, named)?;
    Ok(TensorData { presentation, from_left, from_repl })
}

/// An isomorphism given by a signed generator table, with its inverse.
#[derive(Clone, Debug)]
pub struct Kappa {
    pub forward: Morphism,
    pub inverse: Morphism,
}

/// `table` lists `(source, target, ±1)`; unlisted source generators map to the same name.
pub fn kappa(source: &Arc<Presentation>, target: &Arc<Presentation>, table: &[(String, String, i64)]) -> Result<Kappa> {
    let salg = source.algebra();
    let talg = target.algebra();
    let mut map: HashMap<String, (String, i64)> = HashMap::new();
    for (s, t, sign) in table {
        if sign.abs() != 1 {
            return Err(LagError::NotBijective(format!("{s} -> {sign}*{t}: sign must be ±1")));
        }
        if !salg.has(s) {
            return Err(LagError::NotBijective(format!("`{s}` is not a source generator")));
        }
        if map.insert(s.clone(), (t.clone(), *sign)).is_some() {
            return Err(LagError::NotBijective(format!("`{s}` listed twice")));
        }
    }
    let mut seen = HashSet::new();
    let mut fwd = Vec::new();
    let mut inv = Vec::new();
    for g in salg.generators() {
        let (t, sign) = map.get(&g.name).cloned().unwrap_or_else(|| (g.name.clone(), 1));
        let tid = talg.id(&t).map_err(|_| LagError::NotBijective(format!("`{}` has no target `{t}`", g.name)))?;
        if talg.generator(tid).degree != g.degree {
            return Err(LagError::NotBijective(format!("{} -> {t} changes degree", g.name)));
        }
        if !seen.insert(t.clone()) {
            return Err(LagError::NotBijective(format!("`{t}` hit twice")));
        }
        fwd.push((g.name.clone(), gen(talg, &t).scale(&Coeff::from_int(sign))));
        inv.push((t, gen(salg, &g.name).scale(&Coeff::from_int(sign))));
    }
    if seen.len() != talg.len() {
        let missed: Vec<_> = talg.generators().iter().filter(|g| !seen.contains(&g.name)).map(|g| g.name.clone()).collect();
        return Err(LagError::NotBijective(format!("target generators not hit: {}", missed.join(", "))));
    }
    let forward = Morphism::new(source, target, fwd)?;
    let inverse = Morphism::new(target, source, inv)?;
    for m in [&forward, &inverse] {
        let r = m.check();
        if !r.passed() {
            return Err(LagError::Differential(failures(&r)));
        }
    }
    debug_assert!(forward.then(&inverse).map(|c| c.same_images(&Morphism::identity(source))).unwrap_or(false));
    Ok(Kappa { forward, inverse })
}

impl Kappa {
    pub fn check(&self) -> Report {
        let mut r = Report::new();
        r.extend("kappa ", self.forward.check());
        r.extend("kappa inverse ", self.inverse.check());
        let round = |a: &Morphism, b: &Morphism| a.then(b).map(|c| c.same_images(&Morphism::identity(a.source()))).unwrap_or(false);
        r.record("kappa round trip", round(&self.forward, &self.inverse) && round(&self.inverse, &self.forward), "composite is not the identity");
        r
    }
}

/// An isotropic structure `h` on a map out of the carrier, with the de Rham algebras it lives in.
#[derive(Clone, Debug)]
pub struct Isotropy {
    pub witness: IsotropyWitness,
    pub src: Arc<DeRham>,
    pub tgt: Arc<DeRham>,
}

impl Isotropy {
    pub fn check(&self) -> Report {
        check_isotropic(&self.witness, &self.src, &self.tgt, Direction::Pushforward)
    }
}

/// `R = (plus) − (minus)` transported to the Darboux algebra, fitted as `λ·ω`.
#[derive(Clone, Debug)]
pub struct ResidueComparison {
    /// even: κ′_*μ; general: δ
    pub plus: Elem,
    /// even: κ_*ν; general: ν
    pub minus: Elem,
    pub r: Elem,
    pub target: Elem,
    pub lambda: Option<Coeff>,
    /// exact corrections; none are needed for the identities checked here
    pub d_exact: Elem,
    pub ddr_exact: Elem,
    pub residual: Elem,
}

impl ResidueComparison {
    fn fit(plus: Elem, minus: Elem, target: &Elem) -> Result<ResidueComparison> {
        let r = plus.try_sub(&minus)?;
        let alg = target.algebra().clone();
        // clear the target's denominator so the coefficient ratio is meaningful
        let mut u = Elem::one(&alg);
        for (k, &e) in target.denominator().iter().enumerate() {
            u = &u * &Elem::from_terms(&alg, alg.units()[k].clone()).pow(e);
        }
        let (rn, tn) = (&r * &u, target * &u);
        let lambda = match tn.terms().iter().next() {
            Some((m, c)) => Some(&rn.coefficient(m) * &c.inv().expect("nonzero coefficient")),
            None if r.is_zero() => Some(Coeff::zero()),
            None => None,
        };
        let residual = match &lambda {
            Some(l) => r.try_sub(&target.scale(l))?,
            None => r.clone(),
        };
        Ok(ResidueComparison {
            plus,
            minus,
            r,
            target: target.clone(),
            lambda,
            d_exact: Elem::zero(&alg),
            ddr_exact: Elem::zero(&alg),
            residual,
        })
    }

    pub fn holds(&self) -> bool {
        self.lambda.is_some() && self.residual.is_zero()
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new();
        match &self.lambda {
            Some(l) => r.pass(format!("lambda = {l}")),
            None => r.fail("lambda", "target form vanishes but R does not", 0),
        }
        r.zero("residue residual", &self.residual);
        r
    }
}

/// The even-case critical-locus model of a Darboux algebra.
#[derive(Clone, Debug)]
pub struct EvenPipeline {
    pub darboux: Darboux,
    /// `B = A(0)[y]`
    pub b: Arc<Presentation>,
    pub carrier: CotangentCarrier,
    pub psi: Elem,
    pub zero: Morphism,
    pub graph: Morphism,
    pub d: ReplacementData,
    pub d_prime: ReplacementData,
    /// `B ⊗_C D` along `d_dR Ψ`
    pub tensor: TensorData,
    /// `B ⊗_C D′` along the zero section
    pub tensor_prime: TensorData,
    pub kappa: Kappa,
    pub kappa_prime: Kappa,
    pub nu: Isotropy,
    pub mu: Isotropy,
}

impl EvenPipeline {
    pub fn new(a: &Darboux) -> Result<EvenPipeline> {
        if a.case != Case::Even {
            return Err(LagError::Mismatch("the critical-locus model needs even Darboux data".into()));
        }
        let zs: HashSet<&String> = a.zs.iter().collect();
        let (b, _) = subalgebra_without(&a.presentation, |g| g.degree < -1 || zs.contains(&g.name))?;
        let carrier = shifted_cotangent(&b)?;
        let balg = b.algebra();
        let psi = sum_in(balg, (0..a.f.len()).map(|i| &a.f[i].embed(balg).unwrap() * &gen(balg, &a.ys[i])));
        let zero = zero_section(&carrier)?;
        let graph = graph_section(&carrier, &psi)?;
        let d = replacement_d(&carrier, &Variant::Zero)?;
        let d_prime = replacement_d(&carrier, &Variant::Graph(psi.clone()))?;
        let tensor = derived_tensor(&graph, &d)?;
        let tensor_prime = derived_tensor(&zero, &d_prime)?;
        let table = |th: fn(&str) -> String, ta: fn(&str) -> String| {
            let mut t: Vec<(String, String, i64)> = a.ys.iter().zip(&a.zs).map(|(y, z)| (th(y), z.clone(), 1)).collect();
            t.extend(a.vars.iter().zip(&a.ws).map(|(x, w)| (ta(x), w.clone(), 1)));
            t
        };
        let kappa = kappa(&tensor.presentation, &a.presentation, &table(theta, tau))?;
        let kappa_prime = self::kappa(&tensor_prime.presentation, &a.presentation, &table(theta_prime, tau_prime))?;

        let ddr_d = DeRham::new(&d.presentation)?;
        let mut nu = Elem::zero(ddr_d.algebra());
        for x in &a.vars {
            nu = &nu - &(&ddr_d.ddr_gen(x)? * &ddr_d.ddr_gen(&tau(x))?);
        }
        for y in &a.ys {
            nu = &nu - &(&ddr_d.ddr_gen(y)? * &ddr_d.ddr_gen(&theta(y))?);
        }
        let ddr_dp = DeRham::new(&d_prime.presentation)?;
        let mut mu = Elem::zero(ddr_dp.algebra());
        for x in &a.vars {
            mu = &mu + &(&ddr_dp.ddr_gen(x)? * &ddr_dp.ddr_gen(&tau_prime(x))?);
        }
        for y in &a.ys {
            mu = &mu + &(&ddr_dp.ddr_gen(y)? * &ddr_dp.ddr_gen(&theta_prime(y))?);
        }
        let omega_l = carrier.omega_l.clone();
        let nu = Isotropy {
            witness: IsotropyWitness { morphism: d.inclusion.clone(), omega: omega_l.clone(), h: nu },
            src: carrier.dr.clone(),
            tgt: ddr_d,
        };
        let mu = Isotropy {
            witness: IsotropyWitness { morphism: d_prime.inclusion.clone(), omega: omega_l, h: mu },
            src: carrier.dr.clone(),
            tgt: ddr_dp,
        };
        Ok(EvenPipeline {
            darboux: a.clone(),
            b,
            carrier,
            psi,
            zero,
            graph,
            d,
            d_prime,
            tensor,
            tensor_prime,
            kappa,
            kappa_prime,
            nu,
            mu,
        })
    }

    /// `κ′_*μ − κ_*ν` against ω; `scale` multiplies the Liouville form (and so μ, ν).
    pub fn residue(&self, scale: &Coeff) -> Result<ResidueComparison> {
        let a = &self.darboux;
        let to_a = self.tensor.from_repl.then(&self.kappa.forward)?;
        let to_a_prime = self.tensor_prime.from_repl.then(&self.kappa_prime.forward)?;
        let nu = pullback_form(&to_a, &self.nu.tgt, &a.dr, &self.nu.witness.h.scale(scale))?;
        let mu = pullback_form(&to_a_prime, &self.mu.tgt, &a.dr, &self.mu.witness.h.scale(scale))?;
        ResidueComparison::fit(mu, nu, &a.omega.leading)
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        r.extend("carrier ", self.carrier.check());
        r.extend("zero section ", self.zero.check());
        r.extend("graph section ", self.graph.check());
        r.extend("D ", self.d.check());
        r.extend("D' ", self.d_prime.check());
        r.extend("tensor ", self.tensor.presentation.check_d_squared());
        r.extend("tensor' ", self.tensor_prime.presentation.check_d_squared());
        r.extend("", self.kappa.check());
        r.extend("prime ", self.kappa_prime.check());
        r.extend("nu ", self.nu.check());
        r.extend("mu ", self.mu.check());
        match self.residue(&Coeff::one()) {
            Ok(c) => r.extend("", c.report()),
            Err(e) => r.fail("residue", e.to_string(), 0),
        }
        r
    }
}

/// The fibre-product model `A(0) ×_{T*[−1]A(0)} A(1)` of a general or weighted Darboux algebra.
#[derive(Clone, Debug)]
pub struct GeneralPipeline {
    pub darboux: Darboux,
    pub a0: Arc<Presentation>,
    pub a1: Arc<Presentation>,
    pub carrier: CotangentCarrier,
    /// `C₀ → A(1)`, `α_k ↦ Σ_j g_k^j y_j`
    pub q: Morphism,
    /// `C₀ → A(0)`
    pub p: Morphism,
    pub m: ReplacementData,
    /// `M ⊗_{C₀} A(1)`
    pub tensor: TensorData,
    /// `A → M ⊗_{C₀} A(1)`, `z_k ↦ τ_k`
    pub kappa: Kappa,
    pub nu: Isotropy,
    pub delta: Isotropy,
    pub a0_dr: Arc<DeRham>,
}

impl GeneralPipeline {
    pub fn new(a: &Darboux) -> Result<GeneralPipeline> {
        if a.case == Case::Even {
            return Err(LagError::Mismatch("the fibre-product model needs general or weighted Darboux data".into()));
        }
        let (a1, _) = darboux_subalgebra(&a.presentation, -2)?;
        let (a0, _) = darboux_subalgebra(&a.presentation, -1)?;
        let carrier = shifted_cotangent(&a0)?;
        let a1alg = a1.algebra();
        let qimages = a
            .vars
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let terms = a.ys.iter().enumerate().map(|(j, y)| &a.gk[k][j].embed(a1alg).unwrap() * &gen(a1alg, y));
                (alpha(x), sum_in(a1alg, terms))
            })
            .collect::<Vec<_>>();
        let q = Morphism::new(&carrier.total, &a1, qimages)?;
        let p = zero_section(&carrier)?;
        let m = replacement_d(&carrier, &Variant::GeneralM)?;
        let tensor = derived_tensor(&q, &m)?;
        let table: Vec<(String, String, i64)> = a.zs.iter().zip(&a.vars).map(|(z, x)| (z.clone(), tau(x), 1)).collect();
        let kappa = kappa(&a.presentation, &tensor.presentation, &table)?;

        let a1_dr = DeRham::new(&a1)?;
        let mut nu = Elem::zero(a1_dr.algebra());
        for (j, y) in a.ys.iter().enumerate() {
            let qy = &a1_dr.embed(&a.q[j].embed(a1alg)?)? * &a1_dr.gen(y)?;
            nu = &nu - &(&a1_dr.ddr(&qy)? * &a1_dr.ddr_gen(y)?);
        }
        let m_dr = DeRham::new(&m.presentation)?;
        let delta = sum_in(m_dr.algebra(), a.vars.iter().map(|x| &m_dr.ddr_gen(x).unwrap() * &m_dr.ddr_gen(&tau(x)).unwrap()));
        let omega_l = carrier.omega_l.clone();
        let nu = Isotropy {
            witness: IsotropyWitness { morphism: q.clone(), omega: omega_l.clone(), h: nu },
            src: carrier.dr.clone(),
            tgt: a1_dr,
        };
        let delta = Isotropy {
            witness: IsotropyWitness { morphism: m.inclusion.clone(), omega: omega_l, h: delta },
            src: carrier.dr.clone(),
            tgt: m_dr,
        };
        let a0_dr = DeRham::new(&a0)?;
        Ok(GeneralPipeline { darboux: a.clone(), a0, a1, carrier, q, p, m, tensor, kappa, nu, delta, a0_dr })
    }

    /// δ restricted along `M → A(0)`; the induced homotopy on the tangent complex of `p` is this form.
    pub fn delta_on_a0(&self) -> Result<Elem> {
        Ok(pullback_form(&self.m.witness, &self.delta.tgt, &self.a0_dr, &self.delta.witness.h)?)
    }

    /// `δ − ν` on the tensor.
    pub fn residue_on_tensor(&self, scale: &Coeff) -> Result<(Arc<DeRham>, Elem)> {
        let t_dr = DeRham::new(&self.tensor.presentation)?;
        let delta = pullback_form(&self.tensor.from_repl, &self.delta.tgt, &t_dr, &self.delta.witness.h.scale(scale))?;
        let nu = pullback_form(&self.tensor.from_left, &self.nu.tgt, &t_dr, &self.nu.witness.h.scale(scale))?;
        Ok((t_dr, &delta - &nu))
    }

    /// `Σ ddr x ddr τ + Σ ddr(q y) ddr y` on the tensor.
    pub fn expected_on_tensor(&self, t_dr: &DeRham) -> Result<Elem> {
        let a = &self.darboux;
        let talg = self.tensor.presentation.algebra();
        let mut e = Elem::zero(t_dr.algebra());
        for x in &a.vars {
            e = &e + &(&t_dr.ddr_gen(x)? * &t_dr.ddr_gen(&tau(x))?);
        }
        for (j, y) in a.ys.iter().enumerate() {
            let qy = &t_dr.embed(&a.q[j].embed(talg)?)? * &t_dr.gen(y)?;
            e = &e + &(&t_dr.ddr(&qy)? * &t_dr.ddr_gen(y)?);
        }
        Ok(e)
    }

    pub fn residue(&self, scale: &Coeff) -> Result<ResidueComparison> {
        let a = &self.darboux;
        let to_a = |m: &Morphism, src: &DeRham, h: &Elem| -> Result<Elem> {
            let via = m.then(&self.kappa.inverse)?;
            Ok(pullback_form(&via, src, &a.dr, &h.scale(scale))?)
        };
        let delta = to_a(&self.tensor.from_repl, &self.delta.tgt, &self.delta.witness.h)?;
        let nu = to_a(&self.tensor.from_left, &self.nu.tgt, &self.nu.witness.h)?;
        ResidueComparison::fit(delta, nu, &a.omega.leading)
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        r.extend("carrier ", self.carrier.check());
        r.extend("q ", self.q.check());
        r.extend("p ", self.p.check());
        r.extend("M ", self.m.check());
        r.extend("tensor ", self.tensor.presentation.check_d_squared());
        r.extend("", self.kappa.check());
        r.extend("nu ", self.nu.check());
        r.extend("delta ", self.delta.check());
        match self.delta_on_a0() {
            Ok(e) => r.zero("delta induced homotopy vanishes", &e),
            Err(e) => r.fail("delta induced homotopy vanishes", e.to_string(), 0),
        }
        match self.residue_on_tensor(&Coeff::one()).and_then(|(t, rt)| Ok((rt, self.expected_on_tensor(&t)?))) {
            Ok((rt, want)) => r.zero("residue on tensor", &(&rt - &want)),
            Err(e) => r.fail("residue on tensor", e.to_string(), 0),
        }
        match self.residue(&Coeff::one()) {
            Ok(c) => r.extend("", c.report()),
            Err(e) => r.fail("residue", e.to_string(), 0),
        }
        r
    }
}

/// `B̃ = B(0)[β][y, θ]` with the superpotential ε and the restriction `D → B̃`.
#[derive(Clone, Debug)]
pub struct Superpotential {
    pub btilde: Arc<Presentation>,
    pub epsilon: Elem,
    /// `D → B̃`: identity on x, β, y, θ; `α_j ↦ −Σ ∂g_i/∂x_j θ_i`, `τ ↦ 0`
    pub restriction: Morphism,
    /// `C → B̃` with `α_j ↦ +Σ ∂g_i/∂x_j θ_i` as printed
    pub printed_section: Morphism,
    /// ν⁰ restricted to B̃
    pub nu_restricted: Elem,
    /// `−Σ ddr y ddr θ`
    pub expected: Elem,
}

impl Superpotential {
    pub fn check(&self) -> Report {
        let mut r = Report::new();
        r.extend("btilde ", self.btilde.check_d_squared());
        r.extend("restriction ", self.restriction.check());
        r.zero("restricted nu", &(&self.nu_restricted - &self.expected));
        r
    }
}

pub fn superpotential_presentation(pipe: &EvenPipeline) -> Result<Superpotential> {
    let a = &pipe.darboux;
    let b = &pipe.b;
    let balg = b.algebra();
    let mut gens: Vec<Generator> = a.vars.iter().map(|x| Generator::new(x.clone(), 0)).collect();
    gens.extend(a.ys.iter().map(|y| Generator::new(beta(y), 0)));
    gens.extend(a.ys.iter().map(|y| Generator::new(y.clone(), -1)));
    gens.extend(a.ys.iter().map(|y| Generator::new(theta(y), -1)));
    let alg = Algebra::with_units(balg.field(), gens, &balg.unit_strings())?;
    let mut diff = Vec::new();
    let mut eps = Elem::zero(&alg);
    for y in &a.ys {
        let g = b.diff_by_name(y)?.embed(&alg)?;
        diff.push((y.clone(), g.clone()));
        diff.push((theta(y), gen(&alg, &beta(y))));
        eps = &eps - &(&(&g * &gen(&alg, &theta(y))) + &(&gen(&alg, y) * &gen(&alg, &beta(y))));
    }
    let btilde = Arc::new(Presentation::from_names(alg.clone(), diff)?);
    let sum_dg = |x: &str| -> Result<Elem> {
        let mut e = Elem::zero(&alg);
        for y in &a.ys {
            e = &e + &(&partial_by_name(&b.diff_by_name(y)?.embed(&alg)?, x)? * &gen(&alg, &theta(y)));
        }
        Ok(e)
    };
    let mut images = Vec::new();
    let mut printed = Vec::new();
    for x in &a.vars {
        let s = sum_dg(x)?;
        images.push((alpha(x), -&s));
        images.push((tau(x), Elem::zero(&alg)));
        printed.push((alpha(x), s));
    }
    let restriction = Morphism::new(&pipe.d.presentation, &btilde, images)?;
    let printed_section = Morphism::new(&pipe.carrier.total, &btilde, printed)?;
    let bt_dr = DeRham::new(&btilde)?;
    let nu_restricted = pullback_form(&restriction, &pipe.nu.tgt, &bt_dr, &pipe.nu.witness.h)?;
    let mut expected = Elem::zero(bt_dr.algebra());
    for y in &a.ys {
        expected = &expected - &(&bt_dr.ddr_gen(y)? * &bt_dr.ddr_gen(&theta(y))?);
    }
    Ok(Superpotential { btilde, epsilon: eps, restriction, printed_section, nu_restricted, expected })
}

/// Derived critical locus of a function of degree `degree` on a quasi-smooth base:
/// degree 0 on a smooth base gives the Koszul model `B[ξ_x]`, `dξ_x = ∂Ψ/∂x`;
/// degree −1 gives `B ⊗_C D` along `d_dR Ψ`.
pub fn iterated_crit(base: &Arc<Presentation>, psi: &Elem, degree: i32) -> Result<Arc<Presentation>> {
    let psi = psi.embed(base.algebra())?;
    if let Some(d) = psi.degree()? {
        if d != degree {
            return Err(LagError::Degree { expected: degree, found: format!("{psi} of degree {d}") });
        }
    }
    match degree {
        0 => {
            let alg = base.algebra();
            if let Some(g) = alg.generators().iter().find(|g| g.degree != 0) {
                return Err(LagError::NotPolynomial(format!("a degree 0 function needs a smooth base; {} has degree {}", g.name, g.degree)));
            }
            let xs: Vec<String> = alg.generators().iter().map(|g| g.name.clone()).collect();
            adjoin(base, xs.iter().map(|x| Generator::new(xi(x), -1)).collect(), |a| {
                let psi = psi.embed(a)?;
                xs.iter().map(|x| Ok((xi(x), partial_by_name(&psi, x)?))).collect()
            })
        }
        -1 => {
            let t = shifted_cotangent(base)?;
            let graph = graph_section(&t, &psi)?;
            let d = replacement_d(&t, &Variant::Zero)?;
            Ok(derived_tensor(&graph, &d)?.presentation)
        }
        d => Err(LagError::Degree { expected: d, found: "only degrees 0 and −1 are supported".into() }),
    }
}
