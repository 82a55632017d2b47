from shapeopt.main import main

main()
