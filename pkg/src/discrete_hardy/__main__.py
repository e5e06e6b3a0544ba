from discrete_hardy.cli import main

main()
