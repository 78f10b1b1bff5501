fn main() {
    cinewild::cli::main()
}
