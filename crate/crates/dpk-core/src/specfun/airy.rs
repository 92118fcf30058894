//! Airy function of the first kind and its derivative on the real line.
//!
//! Maclaurin series inside `SWITCH_ABS`, asymptotic expansions beyond; the
//! switch point is fixed so both branches agree to 1e-10 at the seam (see the
//! seam test below). Absolute accuracy is 1e-10 or better on [-15, 15].

/// Branch configuration: series/asymptotic switch point and the expansion cap.
pub struct AiryBranchConfig {
    pub switch_abs: f64,
    pub max_asymptotic_terms: usize,
}

pub const AIRY_BRANCHES: AiryBranchConfig = AiryBranchConfig {
    switch_abs: 6.8,
    max_asymptotic_terms: 40,
};

const AI0: f64 = 0.3550280538878172392600632; // Ai(0) = 3^{-2/3}/Gamma(2/3)
const AIP0: f64 = -0.2588194037928067984051836; // Ai'(0) = -3^{-1/3}/Gamma(1/3)
const SQRT_PI: f64 = 1.7724538509055160272981675;

pub fn airy_ai(x: f64) -> f64 {
    if x.abs() <= AIRY_BRANCHES.switch_abs {
        ai_series(x).0
    } else {
        ai_asymptotic(x).0
    }
}

pub fn airy_ai_prime(x: f64) -> f64 {
    if x.abs() <= AIRY_BRANCHES.switch_abs {
        ai_series(x).1
    } else {
        ai_asymptotic(x).1
    }
}

/// Kahan-compensated accumulator; the series suffers heavy cancellation near
/// the negative end of its range and the compensation buys back a digit.
#[derive(Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// (Ai, Ai') by the Maclaurin series Ai = c1 f - c2 g.
pub(crate) fn ai_series(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f  = sum c_k,  c_0 = 1,      c_{k}  = c_{k-1}  x^3 / ((3k-1) 3k)
    // g  = sum e_k,  e_0 = x,      e_{k}  = e_{k-1}  x^3 / (3k (3k+1))
    // f' = sum d_k,  d_1 = x^2/2,  d_{k+1} = d_k (k+1)/k x^3 / ((3k+2)(3k+3))
    // g' = sum q_k,  q_0 = 1,      q_{k+1} = q_k x^3 / ((3k+1)(3k+3))
    let mut f = Kahan::default();
    let mut g = Kahan::default();
    let mut fp = Kahan::default();
    let mut gp = Kahan::default();

    let mut c = 1.0;
    let mut e = x;
    let mut d = x * x / 2.0;
    let mut q = 1.0;
    f.add(c);
    g.add(e);
    fp.add(d);
    gp.add(q);
    for k in 1..200 {
        let kf = k as f64;
        c *= x3 / ((3.0 * kf - 1.0) * 3.0 * kf);
        e *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        q *= x3 / ((3.0 * kf - 2.0) * 3.0 * kf);
        f.add(c);
        g.add(e);
        gp.add(q);
        if k >= 2 {
            d *= kf / (kf - 1.0) * x3 / ((3.0 * kf - 1.0) * 3.0 * kf);
            fp.add(d);
        }
        if c.abs() < 1e-19 && e.abs() < 1e-19 && q.abs() < 1e-19 {
            break;
        }
    }
    let c1 = AI0;
    let c2 = -AIP0;
    (c1 * f.sum - c2 * g.sum, c1 * fp.sum - c2 * gp.sum)
}

/// Coefficients u_k, v_k of the large-argument expansions.
fn uv(max: usize) -> ([f64; 48], [f64; 48]) {
    let mut u = [0.0; 48];
    let mut v = [0.0; 48];
    u[0] = 1.0;
    v[0] = 1.0;
    for k in 1..max.min(48) {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / (216.0 * kf * (2.0 * kf - 1.0));
        v[k] = u[k] * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
    }
    (u, v)
}

/// (Ai, Ai') from the asymptotic expansions, |x| > switch point.
pub(crate) fn ai_asymptotic(x: f64) -> (f64, f64) {
    let max = AIRY_BRANCHES.max_asymptotic_terms;
    let (u, v) = uv(max);
    if x > 0.0 {
        let zeta = 2.0 / 3.0 * x * libm::sqrt(x);
        let mut su = 0.0;
        let mut sv = 0.0;
        let mut pw = 1.0;
        let mut last = f64::INFINITY;
        for (k, (&uk, &vk)) in u.iter().zip(v.iter()).enumerate().take(max) {
            let tu = uk * pw;
            if tu.abs() > last {
                break;
            }
            last = tu.abs();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            su += sign * tu;
            sv += sign * vk * pw;
            pw /= zeta;
            if tu.abs() < 1e-19 {
                break;
            }
        }
        let pre = libm::exp(-zeta) / (2.0 * SQRT_PI * libm::pow(x, 0.25));
        (
            pre * su,
            -libm::pow(x, 0.25) * libm::exp(-zeta) / (2.0 * SQRT_PI) * sv,
        )
    } else {
        let z = -x;
        let zeta = 2.0 / 3.0 * z * libm::sqrt(z);
        // even/odd splits: P = sum (-1)^k a_{2k} zeta^{-2k}, Q = sum (-1)^k a_{2k+1} zeta^{-2k-1}
        let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
        let mut pw = 1.0;
        let mut last = f64::INFINITY;
        for (k, (&uk, &vk)) in u.iter().zip(v.iter()).enumerate().take(max) {
            let t = uk * pw;
            if t.abs() > last {
                break;
            }
            last = t.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                pu += sign * t;
                pv += sign * vk * pw;
            } else {
                qu += sign * t;
                qv += sign * vk * pw;
            }
            pw /= zeta;
            if t.abs() < 1e-19 {
                break;
            }
        }
        let (s, c) = libm::sincos(zeta - core::f64::consts::FRAC_PI_4);
        let z4 = libm::pow(z, 0.25);
        (
            (c * pu + s * qu) / (SQRT_PI * z4),
            z4 / SQRT_PI * (s * pv - c * qv),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // 40-digit reference values on the full accuracy envelope
    const REFS: &[(f64, f64, f64)] = &[
        (-15.0, 0.2782174908708289295276, 0.2723742043086420208258),
        (-12.5, -0.2762745613811602482252, -0.419331330419505164406),
        (-10.0, 0.04024123848644319068943, 0.9962650441327900559046),
        (-8.0, -0.05270505035638620262208, 0.9355609381983065510255),
        (-7.5, 0.3217757163806478752673, 0.3188095066985545962101),
        (-7.0, 0.1842808352505056372799, -0.7710081684101265477313),
        (-6.8, 0.01210452427736487642602, -0.9103040051588044205577),
        (-6.5, -0.2380203019971158035944, -0.6749524925132021729989),
        (-5.0, 0.350761009024114319788, 0.3271928185544431367949),
        (-2.5, -0.1123250676929660891875, 0.6788527342647943633721),
        (-1.3, 0.5122720060410309232356, 0.1719918067537740626464),
        (-0.5, 0.4757280916105395887986, -0.2040816703395473861448),
        (0.5, 0.2316936064808334897691, -0.224910532664683893136),
        (1.3, 0.09347466577150270452333, -0.12033386559018357707),
        (2.5, 0.01572592338047048999527, -0.0262508810359032303649),
        (
            5.0,
            0.0001083444281360744173499,
            -0.0002474138908684624760002,
        ),
        (
            6.5,
            0.00000279588234320491358546,
            -0.000007231931466601792559814,
        ),
        (
            6.8,
            0.000001275879416876668747604,
            -0.000003372464775376393393557,
        ),
        (7.5, 1.917256067513430751645e-7, -5.31271395972054468479e-7),
        (
            10.0,
            1.104753255289868593355e-10,
            -3.520633676738923636621e-10,
        ),
        (
            12.5,
            2.396827826078049936282e-14,
            -8.521346564673856445297e-14,
        ),
        (
            15.0,
            2.164962520737992298989e-18,
            -8.420567954017772766124e-18,
        ),
    ];

    #[test]
    fn matches_reference_grid_to_1e10() {
        for &(x, ai, aip) in REFS {
            assert!(
                (airy_ai(x) - ai).abs() < 1e-10,
                "Ai({x}): got {}, want {ai}",
                airy_ai(x)
            );
            assert!(
                (airy_ai_prime(x) - aip).abs() < 1e-10,
                "Ai'({x}): got {}, want {aip}",
                airy_ai_prime(x)
            );
        }
    }

    #[test]
    fn value_at_origin() {
        // Maclaurin series oracle value
        assert!((airy_ai(0.0) - 0.3550280538878172).abs() < 1e-12);
        assert!((airy_ai_prime(0.0) + 0.2588194037928068).abs() < 1e-12);
    }

    #[test]
    fn branches_agree_at_the_seam() {
        for &x in &[
            AIRY_BRANCHES.switch_abs,
            -AIRY_BRANCHES.switch_abs,
            AIRY_BRANCHES.switch_abs - 0.01,
            -(AIRY_BRANCHES.switch_abs - 0.01),
        ] {
            let (s, sp) = ai_series(x);
            let (a, ap) = ai_asymptotic(x);
            assert!((s - a).abs() < 1e-10, "seam Ai mismatch at {x}: {s} vs {a}");
            assert!(
                (sp - ap).abs() < 1e-10,
                "seam Ai' mismatch at {x}: {sp} vs {ap}"
            );
        }
    }

    #[test]
    fn satisfies_the_airy_equation() {
        // second central difference of Ai vs x*Ai at x = 1.3
        let x = 1.3;
        let h = 1e-4;
        let dd = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
        assert!((dd - x * airy_ai(x)).abs() < 1e-6);
    }

    #[test]
    fn first_zero() {
        // bisection on the series oracle
        let root = -2.338107410459767038489197;
        assert!(airy_ai(root).abs() < 1e-10);
        // sign change around it
        assert!(airy_ai(root - 1e-3) * airy_ai(root + 1e-3) < 0.0);
    }
}
