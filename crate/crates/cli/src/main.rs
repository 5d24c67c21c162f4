use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdin = std::io::stdin();
    let out = quadric_a1_cli::execute(&args, &mut stdin.lock());
    if !out.stdout.is_empty() {
        let mut so = std::io::stdout().lock();
        let _ = writeln!(so, "{}", out.stdout.trim_end());
    }
    if !out.stderr.is_empty() {
        eprintln!("{}", out.stderr.trim_end());
    }
    std::process::exit(out.code);
}
