from anholonomy.main import cli

cli()
