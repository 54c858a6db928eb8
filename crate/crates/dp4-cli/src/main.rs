mod commands;

fn main() {
    std::process::exit(commands::run());
}
