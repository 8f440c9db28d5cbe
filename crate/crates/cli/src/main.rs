use clap::Parser;

use dotcall64_cli::{commands, Cli};

fn main() {
    let cli = Cli::parse();
    let code = commands::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
