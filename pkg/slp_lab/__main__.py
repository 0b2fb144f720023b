from slp_lab.cli import app

app(prog_name="slp-lab")
