package shop;

public class Shipping {
    public Shipment prepare(Parcel parcel) {
        Shipment shipment = new Shipment(parcel.destination());
        shipment.setWeight(parcel.weight());
        shipment.setCarrier(router.carrierFor(parcel));
        tracker.register(shipment);
        return shipment;
    }

    public double postage(Shipment shipment) {
        double base = tariffs.baseFor(shipment.zone());
        double perKilo = tariffs.perKilo(shipment.zone());
        double cost = base + perKilo * shipment.weight();
        if (shipment.isExpress())
            cost = cost * expressFactor;
        return cost;
    }

    public void relabel(Shipment shipment, Parcel parcel) {
        Label label = printer.labelFor(shipment);
        shipment.setWeight(parcel.grossWeight());
        label.setDestination(parcel.destination());
        printer.print(label);
    }

    public void dispatch(List<Shipment> batch) {
        Truck truck = fleet.nextAvailable();
        for (Shipment s : batch)
            truck.load(s);
        truck.depart(clock.now());
        log.info("dispatched " + batch.size());
    }

    public boolean delivered(String trackingId) {
        TrackingEvent last = tracker.lastEvent(trackingId);
        if (last == null)
            return false;
        return last.isDelivery();
    }
}
