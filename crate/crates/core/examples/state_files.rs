//! Write and read state files, then run the same commands the `cvsep` binary
//! exposes, in-process.

use cvsep::cli::{self, GlobalOptions, StateFile};
use cvsep::states;

pub fn run_example() -> Result<Vec<i32>, Box<dyn std::error::Error>> {
    let text = StateFile::from_state(&states::two_mode_squeezed(0.3)?).to_json();
    print!("{text}");
    assert_eq!(StateFile::parse(&text)?.to_json(), text);

    let g = GlobalOptions::default();
    let checked = cli::check(&text, &g, true);
    print!("{}", checked.stdout);

    let reduced = cli::reduce(&text, &GlobalOptions { json: true, ..g });
    print!("{}", reduced.stdout);

    let generated = cli::generate("random-separable", &["k=2".to_string()], &GlobalOptions { seed: 8, ..g });
    let sep = cli::check(&generated.stdout, &g, false);
    println!("random-separable k=2 -> exit {}", sep.code);

    let broken = cli::check(r#"{"cov": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#, &g, false);
    print!("missing convention -> exit {}: {}", broken.code, broken.stderr);
    Ok(vec![checked.code, reduced.code, sep.code, broken.code])
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
