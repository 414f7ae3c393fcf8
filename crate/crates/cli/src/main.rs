use clap::Parser;

fn main() {
    let cli = qpcat::commands::Cli::parse();
    match qpcat::commands::run(cli) {
        Ok(out) => {
            if !out.text.is_empty() {
                println!("{}", out.text);
            }
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {}", e);
            std::process::exit(2);
        }
    }
}
