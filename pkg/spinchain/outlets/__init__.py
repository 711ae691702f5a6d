from spinchain.outlets.csv_outlet import CsvOutlet
from spinchain.outlets.json_outlet import JsonOutlet
from spinchain.outlets.print_outlet import PrintOutlet
