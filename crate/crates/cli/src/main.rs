fn main() {
    std::process::exit(markoff_lab::run(std::env::args_os()));
}
