//! Drive the command-line front end in-process.

fn main() {
    for argv in [
        vec!["codfkit", "star", "D(x) = 0"],
        vec!["codfkit", "--format", "text", "dim", "x^2 + y^2 = 1"],
        vec!["codfkit", "--order", "5", "dl-lift", "--f", "x' - x", "--jet", "1,1"],
    ] {
        let out = codfkit::cli::run(argv);
        print!("{}", out.stdout);
        eprint!("{}", out.stderr);
        println!("exit {}", out.code);
    }
}
