// Placeholder entry point; the full command set lands with the remaining
// modules.
int main() { return 0; }
