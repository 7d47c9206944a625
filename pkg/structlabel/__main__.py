from structlabel.main import app

app(prog_name="structlabel")
