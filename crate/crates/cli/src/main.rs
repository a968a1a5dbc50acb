use clap::Parser;

fn main() {
    let (text, code) = hpt_cli::run(hpt_cli::Cli::parse());
    if !text.is_empty() {
        if code == hpt_cli::EXIT_INPUT {
            eprintln!("{text}");
        } else {
            println!("{text}");
        }
    }
    std::process::exit(code);
}
