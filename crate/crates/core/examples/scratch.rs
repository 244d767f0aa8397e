use malfatti::cycles::embed_triangle;
use malfatti::hart::hart_verify;
use malfatti::steiner::steiner_triangle;
use rand::Rng;
use rand::SeedableRng;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let mut fails = 0usize;
    let mut worst_cert = 0.0f64;
    let mut worst_hart = 0.0f64;
    let total = 200usize;
    for case in 0..total {
        let (a, b, c) = loop {
            let a = rng.gen_range(0.05..3.0);
            let b = rng.gen_range(0.05..3.0);
            let c = rng.gen_range(0.05..3.0);
            let margin = 0.02;
            if a + b > c + margin && b + c > a + margin && c + a > b + margin {
                break (a, b, c);
            }
        };
        let tri = match embed_triangle(a, b, c, 1e-10) {
            Ok(t) => t,
            Err(e) => {
                println!("case {case} sides ({a:.17}, {b:.17}, {c:.17}) EMBED ERR {e:?}");
                fails += 1;
                continue;
            }
        };
        let sys = match steiner_triangle(&tri, 1e-10) {
            Ok(s) => s,
            Err(e) => {
                println!("case {case} sides ({a:.17}, {b:.17}, {c:.17}) ERR {e:?}");
                fails += 1;
                continue;
            }
        };
        for cert in sys.mutual.iter().chain(sys.given_contacts.iter().flatten()) {
            worst_cert = worst_cert.max(cert.residual);
        }
        match hart_verify(&sys, 1e-8) {
            Ok(report) => {
                for chk in &report.checks {
                    worst_hart = worst_hart.max(chk.residual);
                    if !chk.pass {
                        println!(
                            "case {case} sides ({a:.17}, {b:.17}, {c:.17}) hart check '{}' residual {:.3e}",
                            chk.name, chk.residual
                        );
                        fails += 1;
                    }
                }
            }
            Err(e) => {
                println!("case {case} sides ({a:.17}, {b:.17}, {c:.17}) HART ERR {e:?}");
                fails += 1;
            }
        }
    }
    println!("fails {fails}/{total}, worst certificate {worst_cert:.3e}, worst hart {worst_hart:.3e}");
}
