use clap::Parser;

fn main() {
    let cli = match ntcp_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ntcp_cli::EXIT_USAGE } else { ntcp_cli::EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(ntcp_cli::run(cli));
}
